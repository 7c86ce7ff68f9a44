//! World view search over the guess space.
//!
//! The space of guesses over n epistemic negations is walked either
//! naively (all 2^n at once) or level by level, from the guess with
//! every negation assumed down to the empty one. Level order makes the
//! subset-maximal semantics cheap: any guess that is a strict subset
//! of an already verified guess can be skipped, because levels above
//! it were exhausted first. Guesses that survive pruning are chunked
//! into groups, each group is compiled (or solved guess by guess), and
//! groups of one round run on worker threads. Results are folded back
//! in group order, so every configuration is deterministic.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::asp::{AspError, Engine};
use crate::model::{extract_ep, full_mask, EpOrder, Guess, Program, SemanticsMode, WorldView};
use crate::semantics::{epistemic_reduct, maximal_only, phi_of, sort_views};
use crate::translate::{translate, TranslateError};

/// Generating all guesses at once is exponential; beyond this many
/// negations the naive algorithm refuses to try.
pub const NAIVE_EP_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Materialize every guess, solve them all, filter afterwards.
    Naive,
    /// Level-ordered descent with subset pruning, one guess at a time.
    Level,
    /// Level-ordered descent solving groups of guesses per call.
    Group,
    /// Grouped descent with groups of one level solved on worker threads.
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Compile guess blocks into one ASP program per call.
    Translate,
    /// Solve each guess's reduct directly.
    Direct,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub algorithm: Algorithm,
    pub route: Route,
    /// Group size for [`Algorithm::Group`] and [`Algorithm::Parallel`].
    pub guesses_per_call: usize,
    /// Worker threads per round for [`Algorithm::Parallel`].
    pub workers: usize,
    /// Stop after this many world views.
    pub max_world_views: Option<usize>,
    pub mode: SemanticsMode,
    /// Descend from this level instead of the top. Levels above it are
    /// skipped outright, so use it only when they are known empty.
    pub level_start: Option<u32>,
    /// Keep only guesses whose bit at each index has the given value.
    pub fixed_bits: Vec<(usize, bool)>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            algorithm: Algorithm::Level,
            route: Route::Translate,
            guesses_per_call: 1,
            workers: 1,
            max_world_views: None,
            mode: SemanticsMode::Se16,
            level_start: None,
            fixed_bits: Vec::new(),
        }
    }
}

/// Counters for one search run. A solver call is one guess submitted
/// for solving; a group of g guesses compiled into a single program
/// counts as g calls.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub levels_visited: u32,
    pub guesses_generated: u64,
    pub guesses_pruned: u64,
    pub solver_calls: u64,
    pub answer_sets_seen: u64,
    pub peak_in_flight_guesses: usize,
    pub wall_time: Duration,
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "levels visited:    {}", self.levels_visited)?;
        writeln!(f, "guesses generated: {}", self.guesses_generated)?;
        writeln!(f, "guesses pruned:    {}", self.guesses_pruned)?;
        writeln!(f, "solver calls:      {}", self.solver_calls)?;
        writeln!(f, "answer sets seen:  {}", self.answer_sets_seen)?;
        writeln!(f, "peak in flight:    {}", self.peak_in_flight_guesses)?;
        write!(f, "wall time:         {:.1?}", self.wall_time)
    }
}

#[derive(Debug)]
pub struct SearchOutcome {
    pub world_views: Vec<WorldView>,
    pub stats: SearchStats,
    pub ep: EpOrder,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("{items} epistemic negations exceed the 64-bit guess encoding")]
    EpOverflow { items: usize },
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Solve(#[from] AspError),
    #[error(transparent)]
    Decode(#[from] TranslateError),
}

/// Next integer with the same number of set bits, unbounded above.
pub fn next_same_popcount(x: u64) -> Option<u64> {
    if x == 0 {
        return None;
    }
    let c = x & x.wrapping_neg();
    let r = x.wrapping_add(c);
    if r == 0 {
        // The set bits already occupy the top of the word.
        return None;
    }
    Some(r | (((x ^ r) >> 2) / c))
}

/// All guesses of popcount `k` over `n` items, in ascending numeric
/// order. Empty when k exceeds n.
pub fn level_guesses(n: usize, k: u32) -> impl Iterator<Item = Guess> {
    let mask = full_mask(n);
    let seed = if k as usize > n {
        None
    } else {
        Some(full_mask(k as usize))
    };
    std::iter::successors(seed, move |&x| {
        if x == 0 {
            None
        } else {
            next_same_popcount(x).filter(|&y| y <= mask)
        }
    })
    .map(Guess::new)
}

struct GroupResult {
    views: Vec<WorldView>,
    solver_calls: u64,
    answer_sets_seen: u64,
}

/// Solve one group of guesses and keep the verified ones, in the
/// group's order.
fn solve_group(
    p: &Program,
    ep: &EpOrder,
    engine: &Engine,
    group: &[Guess],
    route: Route,
) -> Result<GroupResult, SearchError> {
    match route {
        Route::Translate => {
            let t = translate(p, ep, group);
            let solved = engine.answer_sets(&t.program)?;
            let answer_sets_seen = solved.sets.len() as u64;
            let verified = t.verified_views(ep, &solved.sets)?;
            let views = group
                .iter()
                .filter_map(|g| {
                    verified.get(g).map(|sets| WorldView {
                        phi: *g,
                        belief_sets: sets.clone(),
                    })
                })
                .collect();
            Ok(GroupResult {
                views,
                solver_calls: group.len() as u64,
                answer_sets_seen,
            })
        }
        Route::Direct => {
            let mut views = Vec::new();
            let mut answer_sets_seen = 0;
            for g in group {
                let sets = engine.answer_sets(&epistemic_reduct(p, ep, *g))?.sets;
                answer_sets_seen += sets.len() as u64;
                if !sets.is_empty() && phi_of(ep, &sets) == *g {
                    views.push(WorldView {
                        phi: *g,
                        belief_sets: sets,
                    });
                }
            }
            Ok(GroupResult {
                views,
                solver_calls: group.len() as u64,
                answer_sets_seen,
            })
        }
    }
}

fn run_round(
    p: &Program,
    ep: &EpOrder,
    engine: &Engine,
    groups: &[Vec<Guess>],
    route: Route,
) -> Vec<Result<GroupResult, SearchError>> {
    if let [only] = groups {
        return vec![solve_group(p, ep, engine, only, route)];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = groups
            .iter()
            .map(|group| {
                let engine = engine.clone();
                scope.spawn(move || solve_group(p, ep, &engine, group, route))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("group worker panicked"))
            .collect()
    })
}

fn validate(cfg: &SearchConfig, n: usize) -> Result<(), SearchError> {
    if cfg.guesses_per_call == 0 {
        return Err(SearchError::BadConfig(
            "guesses per call must be at least 1".into(),
        ));
    }
    if cfg.workers == 0 {
        return Err(SearchError::BadConfig(
            "worker count must be at least 1".into(),
        ));
    }
    for (i, _) in &cfg.fixed_bits {
        if *i >= n {
            return Err(SearchError::BadConfig(format!(
                "fixed bit index {i} is out of range for {n} epistemic negations"
            )));
        }
    }
    if cfg.algorithm == Algorithm::Naive && n > NAIVE_EP_CAP {
        return Err(SearchError::BadConfig(format!(
            "naive search over {n} epistemic negations would materialize 2^{n} guesses; \
             the limit is {NAIVE_EP_CAP}"
        )));
    }
    Ok(())
}

/// Compute the world views of `p` under the configured algorithm,
/// route, grouping, and mode.
pub fn solve(
    p: &Program,
    engine: &Engine,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    let ep = extract_ep(p);
    if ep.len() > 64 {
        return Err(SearchError::EpOverflow { items: ep.len() });
    }
    let n = ep.len();
    validate(cfg, n)?;

    let started = Instant::now();
    let mut stats = SearchStats::default();
    let keep = |g: &Guess| cfg.fixed_bits.iter().all(|(i, v)| g.contains(*i) == *v);

    let mut views = if cfg.algorithm == Algorithm::Naive {
        let guesses: Vec<Guess> = (0..=full_mask(n)).map(Guess::new).filter(keep).collect();
        stats.guesses_generated = guesses.len() as u64;
        stats.peak_in_flight_guesses = guesses.len();
        let mut verified = Vec::new();
        if !guesses.is_empty() {
            let result = solve_group(p, &ep, engine, &guesses, cfg.route)?;
            stats.solver_calls = result.solver_calls;
            stats.answer_sets_seen = result.answer_sets_seen;
            verified = result.views;
        }
        if cfg.mode == SemanticsMode::Se16 {
            verified = maximal_only(verified);
        }
        sort_views(&mut verified);
        if let Some(cap) = cfg.max_world_views {
            verified.truncate(cap);
        }
        verified
    } else {
        let (group_size, max_groups) = match cfg.algorithm {
            Algorithm::Level => (1, 1),
            Algorithm::Group => (cfg.guesses_per_call, 1),
            Algorithm::Parallel => (cfg.guesses_per_call, cfg.workers),
            Algorithm::Naive => unreachable!(),
        };
        let prune = cfg.mode == SemanticsMode::Se16;
        let start = cfg.level_start.map_or(n as u32, |s| s.min(n as u32));
        let mut omega: Vec<WorldView> = Vec::new();
        let mut done = false;

        for k in (0..=start).rev() {
            if done {
                break;
            }
            stats.levels_visited += 1;
            let mut pending = level_guesses(n, k).filter(keep);
            loop {
                // Assemble the next round, pruning at consumption time:
                // omega only ever holds views from higher levels here,
                // and guesses of one level never subsume each other.
                let mut groups: Vec<Vec<Guess>> = Vec::new();
                while groups.len() < max_groups {
                    let mut group = Vec::new();
                    while group.len() < group_size {
                        match pending.next() {
                            Some(g) => {
                                stats.guesses_generated += 1;
                                if prune && omega.iter().any(|w| g.is_strict_subset(&w.phi)) {
                                    stats.guesses_pruned += 1;
                                } else {
                                    group.push(g);
                                }
                            }
                            None => break,
                        }
                    }
                    if group.is_empty() {
                        break;
                    }
                    groups.push(group);
                }
                if groups.is_empty() {
                    break;
                }
                let in_flight = groups.iter().map(Vec::len).sum();
                stats.peak_in_flight_guesses = stats.peak_in_flight_guesses.max(in_flight);

                let results = run_round(p, &ep, engine, &groups, cfg.route);
                let mut found = Vec::new();
                for result in results {
                    let group_result = result?;
                    stats.solver_calls += group_result.solver_calls;
                    stats.answer_sets_seen += group_result.answer_sets_seen;
                    found.extend(group_result.views);
                }
                for view in found {
                    omega.push(view);
                    if cfg.max_world_views == Some(omega.len()) {
                        done = true;
                        break;
                    }
                }
                if done {
                    break;
                }
            }
        }
        sort_views(&mut omega);
        omega
    };

    sort_views(&mut views);
    stats.wall_time = started.elapsed();
    Ok(SearchOutcome {
        world_views: views,
        stats,
        ep,
    })
}
