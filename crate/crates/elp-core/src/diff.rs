//! Differential checking across search configurations.
//!
//! For one program this runs the reference enumeration, then every
//! algorithm, route, group size, and worker count that could behave
//! differently, in both semantics modes. Any deviation comes back as
//! a [`Disagreement`]; an empty result means all routes agree and all
//! reported world views pass the fixpoint check. Meant for programs
//! with small guess spaces, since the reference walks all of them.

use std::fmt;

use thiserror::Error;

use crate::asp::Engine;
use crate::model::{extract_ep, Program, SemanticsMode, WorldView};
use crate::search::{solve, Algorithm, Route, SearchConfig, SearchError};
use crate::semantics::{world_view_fixpoint, world_views_oracle, SemanticsError};

#[derive(Debug, Clone)]
pub struct Disagreement {
    pub program: String,
    /// Which check failed, e.g. `se16 Group Translate g=2 w=1`.
    pub config: String,
    pub expected: Vec<String>,
    pub actual: Vec<String>,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "disagreement under {}", self.config)?;
        writeln!(f, "  expected: {}", self.expected.join("; "))?;
        writeln!(f, "  actual:   {}", self.actual.join("; "))?;
        write!(
            f,
            "  program:  {}",
            self.program.trim_end().replace('\n', " ")
        )
    }
}

#[derive(Debug, Error)]
pub enum DiffError {
    #[error(transparent)]
    Oracle(#[from] SemanticsError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

fn render(views: &[WorldView]) -> Vec<String> {
    views
        .iter()
        .map(|w| {
            let sets: Vec<String> = w.belief_sets.iter().map(|s| s.to_string()).collect();
            format!("guess {}: {}", w.phi.x, sets.join(" "))
        })
        .collect()
}

/// Compare two world view lists, reporting a mismatch as a
/// disagreement under `config`.
pub fn agree(
    p: &Program,
    config: &str,
    expected: &[WorldView],
    actual: &[WorldView],
) -> Option<Disagreement> {
    if expected == actual {
        None
    } else {
        Some(Disagreement {
            program: p.to_string(),
            config: config.to_string(),
            expected: render(expected),
            actual: render(actual),
        })
    }
}

/// Configuration shapes that exercise distinct code paths. Group size
/// and worker count only matter for the algorithms that read them.
fn shapes() -> Vec<(Algorithm, Route, usize, usize)> {
    let mut v = Vec::new();
    for route in [Route::Translate, Route::Direct] {
        v.push((Algorithm::Naive, route, 1, 1));
        v.push((Algorithm::Level, route, 1, 1));
        for g in [2, 4] {
            v.push((Algorithm::Group, route, g, 1));
        }
        for (g, w) in [(1, 2), (2, 2), (4, 4)] {
            v.push((Algorithm::Parallel, route, g, w));
        }
    }
    v
}

/// Run every configuration of the search on `p` and collect all
/// deviations from the reference enumeration.
pub fn check_program(p: &Program, engine: &Engine) -> Result<Vec<Disagreement>, DiffError> {
    let ep = extract_ep(p);
    let mut found = Vec::new();
    let mut references = Vec::new();
    for mode in [SemanticsMode::Se16, SemanticsMode::Kwbgz15] {
        let reference = world_views_oracle(p, mode, engine)?;
        for wv in &reference {
            if !world_view_fixpoint(p, &ep, wv, engine).map_err(SemanticsError::from)? {
                found.push(Disagreement {
                    program: p.to_string(),
                    config: format!("{mode} fixpoint"),
                    expected: render(std::slice::from_ref(wv)),
                    actual: vec!["fixpoint check failed".into()],
                });
            }
        }
        for (algorithm, route, guesses_per_call, workers) in shapes() {
            let cfg = SearchConfig {
                algorithm,
                route,
                guesses_per_call,
                workers,
                mode,
                ..SearchConfig::default()
            };
            let outcome = solve(p, engine, &cfg)?;
            let config = format!("{mode} {algorithm:?} {route:?} g={guesses_per_call} w={workers}");
            found.extend(agree(p, &config, &reference, &outcome.world_views));
        }
        references.push(reference);
    }
    // Subset maximality only ever removes world views, so everything
    // the strict mode reports must also appear in the inclusive mode.
    let [se, all] = [&references[0], &references[1]];
    for wv in se {
        if !all.contains(wv) {
            found.push(Disagreement {
                program: p.to_string(),
                config: "se16 within kwbgz15".into(),
                expected: render(std::slice::from_ref(wv)),
                actual: render(all),
            });
        }
    }
    Ok(found)
}
