//! Rendering of solver results as text or JSON.
//!
//! JSON objects serialize with keys in sorted order and all sets in
//! their canonical order, so equal results always produce identical
//! bytes. The optional stats block is the one exception: its wall
//! time varies between runs.

use elp_core::{guess_to_phi, EpOrder, SearchOutcome, SearchStats, SemanticsMode};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn program_digest(text: &str) -> String {
    format!("sha256:{:x}", Sha256::digest(text.as_bytes()))
}

/// One line per world view, in search order. The line lists the
/// belief sets only; the decoded guess lives in the JSON form.
pub fn text_document(outcome: &SearchOutcome, with_stats: bool) -> String {
    let mut out = String::new();
    if outcome.world_views.is_empty() {
        out.push_str("no world views\n");
    } else {
        for (i, wv) in outcome.world_views.iter().enumerate() {
            let sets: Vec<String> = wv.belief_sets.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!("World view {}: {}\n", i + 1, sets.join(" ")));
        }
    }
    if with_stats {
        out.push('\n');
        out.push_str(&outcome.stats.to_string());
        out.push('\n');
    }
    out
}

fn stats_json(stats: &SearchStats) -> Value {
    json!({
        "levels_visited": stats.levels_visited,
        "guesses_generated": stats.guesses_generated,
        "guesses_pruned": stats.guesses_pruned,
        "solver_calls": stats.solver_calls,
        "answer_sets_seen": stats.answer_sets_seen,
        "peak_in_flight_guesses": stats.peak_in_flight_guesses,
        "wall_time_ms": stats.wall_time.as_secs_f64() * 1e3,
    })
}

pub fn json_document(
    outcome: &SearchOutcome,
    mode: SemanticsMode,
    digest: &str,
    with_stats: bool,
) -> Value {
    let views: Vec<Value> = outcome
        .world_views
        .iter()
        .enumerate()
        .map(|(i, wv)| {
            let phi: Vec<String> = decoded_phi(wv.phi, &outcome.ep);
            let sets: Vec<Vec<String>> = wv
                .belief_sets
                .iter()
                .map(|s| s.iter().map(|l| l.to_string()).collect())
                .collect();
            json!({ "index": i + 1, "phi": phi, "belief_sets": sets })
        })
        .collect();
    let mut doc = json!({
        "semantics": mode.to_string(),
        "program_digest": digest,
        "world_views": views,
    });
    if with_stats {
        doc["stats"] = stats_json(&outcome.stats);
    }
    doc
}

fn decoded_phi(g: elp_core::Guess, ep: &EpOrder) -> Vec<String> {
    guess_to_phi(g, ep)
        .expect("guess comes from this order")
        .iter()
        .map(|item| item.to_string())
        .collect()
}
