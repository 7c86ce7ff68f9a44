//! Reducts and world view checking.
//!
//! A guess selects which epistemic negations of a program are assumed
//! to hold. The guess-driven reduct replaces every subjective body
//! element by an objective residue under that assumption, turning the
//! program into plain ASP. A guess is verified when the reduct has
//! answer sets and reading the epistemic negations back off those
//! answer sets reproduces exactly the guess.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::asp::{AspError, Engine};
use crate::model::{
    full_mask, BeliefSet, BodyElement, EpItem, EpOrder, Guess, Modality, ObjectiveLiteral, Program,
    Rule, SemanticsMode, WorldView,
};

/// Exhaustive enumeration refuses larger guess spaces; 2^16 reduct
/// solves is already slow enough for a reference implementation.
pub const ORACLE_EP_CAP: usize = 16;

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error("{items} epistemic negations exceed the exhaustive enumeration cap of {cap}")]
    EpOverflow { items: usize, cap: usize },
    #[error(transparent)]
    Solve(#[from] AspError),
}

fn in_every(l: &ObjectiveLiteral, sets: &BTreeSet<BeliefSet>) -> bool {
    sets.iter().all(|s| s.contains(l))
}

fn in_some(l: &ObjectiveLiteral, sets: &BTreeSet<BeliefSet>) -> bool {
    sets.iter().any(|s| s.contains(l))
}

/// Does this epistemic negation hold with respect to `sets`? `not K l`
/// holds when `l` misses at least one set, `M l` when `l` is in at
/// least one.
pub fn negation_holds(item: &EpItem, sets: &BTreeSet<BeliefSet>) -> bool {
    debug_assert!(
        !sets.is_empty(),
        "holds is undefined for an empty collection"
    );
    match item {
        EpItem::NotK(l) => !in_every(l, sets),
        EpItem::M(l) => in_some(l, sets),
    }
}

/// Read the guess a collection of belief sets induces: bit i is set
/// exactly when epistemic negation i holds with respect to the sets.
pub fn phi_of(ep: &EpOrder, sets: &BTreeSet<BeliefSet>) -> Guess {
    let mut x = 0u64;
    for (i, item) in ep.items().iter().enumerate() {
        if negation_holds(item, sets) {
            x |= 1 << i;
        }
    }
    Guess::new(x)
}

/// How the guess-driven reduct renders an `M l` element whose negation
/// is assumed false: keep it checkable as `not not l`, or collapse the
/// double negation to the plain literal. The two programs have the same
/// answer sets whenever the guess ends up verified, but can differ on
/// unverified guesses, which makes the collapsed form useful as an
/// independent confirmation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MissedM {
    DoubleNegation,
    Collapsed,
}

fn reduce(p: &Program, holds: &dyn Fn(&EpItem) -> bool, missed_m: MissedM) -> Program {
    let mut rules = Vec::new();
    'rules: for r in p.rules() {
        let mut body: Vec<BodyElement> = Vec::new();
        for e in r.body() {
            match e {
                BodyElement::Objective { .. } => body.push(e.clone()),
                BodyElement::Subjective { atom, neg_depth } => {
                    let item = match atom.modality {
                        Modality::K => EpItem::NotK(atom.literal.clone()),
                        Modality::M => EpItem::M(atom.literal.clone()),
                    };
                    let l = atom.literal.clone();
                    let obj = |literal, neg_depth| BodyElement::Objective { literal, neg_depth };
                    match (atom.modality, *neg_depth, holds(&item)) {
                        // K l assumed false: the rule can never fire.
                        (Modality::K, 0, true) => continue 'rules,
                        (Modality::K, 0, false) => body.push(obj(l, 0)),
                        // not K l assumed true: the element is settled.
                        (Modality::K, 1, true) => {}
                        (Modality::K, 1, false) => body.push(obj(l, 1)),
                        // M l assumed true: the element is settled.
                        (Modality::M, 0, true) => {}
                        (Modality::M, 0, false) => match missed_m {
                            MissedM::DoubleNegation => body.push(obj(l, 2)),
                            MissedM::Collapsed => body.push(obj(l, 0)),
                        },
                        // not M l assumed false: the rule can never fire.
                        (Modality::M, 1, true) => continue 'rules,
                        (Modality::M, 1, false) => body.push(obj(l, 1)),
                        _ => unreachable!("parser bounds subjective negation depth to 0 or 1"),
                    }
                }
            }
        }
        rules.push(Rule::new(r.head().to_vec(), body));
    }
    Program::new(rules)
}

fn holds_by_guess<'a>(ep: &'a EpOrder, phi: Guess) -> impl Fn(&EpItem) -> bool + 'a {
    move |item| {
        let i = ep
            .index_of(item)
            .expect("subjective atom missing from its own ep order");
        phi.contains(i)
    }
}

/// Guess-driven reduct: plain ASP whose answer sets are the candidate
/// belief sets for `phi`.
pub fn epistemic_reduct(p: &Program, ep: &EpOrder, phi: Guess) -> Program {
    reduce(p, &holds_by_guess(ep, phi), MissedM::DoubleNegation)
}

/// Variant of [`epistemic_reduct`] that collapses `not not l` residues
/// to `l`. Agrees with it on verified guesses; used for cross-checks.
pub fn collapsed_reduct(p: &Program, ep: &EpOrder, phi: Guess) -> Program {
    reduce(p, &holds_by_guess(ep, phi), MissedM::Collapsed)
}

/// Reduct driven by a concrete collection of belief sets instead of a
/// guess: each epistemic negation is evaluated against `sets` directly.
/// A collection is self-supporting when solving this reduct returns the
/// collection itself.
pub fn modal_reduct(p: &Program, sets: &BTreeSet<BeliefSet>) -> Program {
    reduce(
        p,
        &|item| negation_holds(item, sets),
        MissedM::DoubleNegation,
    )
}

/// Solve the reduct for one guess and verify it. `Ok(None)` means the
/// guess is not verified: either the reduct has no answer sets, or the
/// answer sets induce a different guess.
pub fn check_candidate(
    p: &Program,
    ep: &EpOrder,
    phi: Guess,
    engine: &Engine,
) -> Result<Option<BTreeSet<BeliefSet>>, AspError> {
    let sets = engine.answer_sets(&epistemic_reduct(p, ep, phi))?.sets;
    if sets.is_empty() || phi_of(ep, &sets) != phi {
        return Ok(None);
    }
    Ok(Some(sets))
}

/// Keep only guesses with no strict superset among the verified ones.
pub fn maximal_only(mut views: Vec<WorldView>) -> Vec<WorldView> {
    let guesses: Vec<Guess> = views.iter().map(|w| w.phi).collect();
    views.retain(|w| !guesses.iter().any(|g| w.phi.is_strict_subset(g)));
    views
}

/// Order world views for output: larger guesses first, ties broken by
/// the numeric encoding. Search visits levels top down, so this is also
/// the discovery order of the level-wise algorithms.
pub fn sort_views(views: &mut [WorldView]) {
    views.sort_by(|a, b| {
        b.phi
            .popcount()
            .cmp(&a.phi.popcount())
            .then(a.phi.x.cmp(&b.phi.x))
    });
}

/// Reference world view enumeration: try every guess, verify each one,
/// then apply the mode filter. Exponential in the number of epistemic
/// negations and deliberately free of pruning and grouping.
pub fn world_views_oracle(
    p: &Program,
    mode: SemanticsMode,
    engine: &Engine,
) -> Result<Vec<WorldView>, SemanticsError> {
    let ep = crate::model::extract_ep(p);
    if ep.len() > ORACLE_EP_CAP {
        return Err(SemanticsError::EpOverflow {
            items: ep.len(),
            cap: ORACLE_EP_CAP,
        });
    }
    let mut views = Vec::new();
    for x in 0..=full_mask(ep.len()) {
        let phi = Guess::new(x);
        if let Some(sets) = check_candidate(p, &ep, phi, engine)? {
            views.push(WorldView {
                phi,
                belief_sets: sets,
            });
        }
        if ep.is_empty() {
            break;
        }
    }
    if mode == SemanticsMode::Se16 {
        views = maximal_only(views);
    }
    sort_views(&mut views);
    Ok(views)
}

/// Confirm a reported world view two independent ways: the collapsed
/// reduct of its guess must reproduce exactly its belief sets, and so
/// must the reduct driven by the belief sets themselves.
pub fn world_view_fixpoint(
    p: &Program,
    ep: &EpOrder,
    wv: &WorldView,
    engine: &Engine,
) -> Result<bool, AspError> {
    let via_guess = engine.answer_sets(&collapsed_reduct(p, ep, wv.phi))?.sets;
    if via_guess != wv.belief_sets {
        return Ok(false);
    }
    let via_sets = engine.answer_sets(&modal_reduct(p, &wv.belief_sets))?.sets;
    Ok(via_sets == wv.belief_sets)
}
