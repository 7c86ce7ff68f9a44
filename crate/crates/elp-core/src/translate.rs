//! Compilation of an ELP plus a block of guesses into one ASP program.
//!
//! Each subjective atom is replaced by an objective residue wired to a
//! pair of toggle atoms per epistemic negation. For `not K l` the
//! toggles are `k0_l` (negation assumed to hold) and `k1_l` (assumed to
//! fail); for `M l` they are `m1_l` (hold) and `m0_l` (fail). Helper
//! rules derive one marker atom per negation from its toggles:
//!
//! ```text
//! neg_k_l :- k0_l.            m_l :- m1_l.
//! neg_k_l :- k1_l, not l.     m_l :- m0_l, not not l.
//! ```
//!
//! and the rewritten rules consult only the markers: `K l` becomes
//! `not neg_k_l, l`, `not K l` becomes `neg_k_l`, `M l` becomes `m_l`,
//! `not M l` becomes `not m_l`. With one guess the toggles are plain
//! facts, so the answer sets are exactly those of the guess-driven
//! reduct plus bookkeeping atoms. With several guesses a selector atom
//! per guess gates its toggle facts, and a choice cycle plus
//! constraints make the selectors mutually exclusive and exhaustive,
//! so one solver call covers the whole block: every answer set carries
//! the toggles of exactly one guess and can be routed back to it.
//!
//! Selectors are encoded as an even negative cycle (`sel :- not nsel`,
//! `nsel :- not sel`) rather than one disjunctive fact: disjunction is
//! subject to model minimality, which would let answer sets of one
//! guess discard answer sets of another.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{
    full_mask, Atom, BeliefSet, BodyElement, EpItem, EpOrder, Guess, Modality, Program, Rule,
};
use crate::names;
use crate::semantics::phi_of;

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("answer set carries no toggle for epistemic negation {index}: {set}")]
    MissingToggle { index: usize, set: String },
    #[error("answer set carries both toggles for epistemic negation {index}: {set}")]
    ClashingToggles { index: usize, set: String },
}

/// Toggle atoms of one epistemic negation: `on` asserts the negation
/// holds, `off` that it fails.
#[derive(Debug, Clone)]
struct TogglePair {
    on: Atom,
    off: Atom,
}

/// One compiled block: the combined program and enough bookkeeping to
/// route answer sets back to guesses and strip the fresh atoms.
#[derive(Debug, Clone)]
pub struct Translation {
    pub program: Program,
    pub guesses: Vec<Guess>,
    toggles: Vec<TogglePair>,
    fresh: BTreeSet<String>,
}

/// Compile `p` for the given guesses. Guesses must be distinct and
/// within the range of the extracted negation order. With no guesses
/// at all the result is the bare rewrite: helper rules whose toggle
/// atoms never fire, useful for inspecting the compilation itself.
pub fn translate(p: &Program, ep: &EpOrder, guesses: &[Guess]) -> Translation {
    debug_assert_eq!(
        guesses.iter().collect::<BTreeSet<_>>().len(),
        guesses.len(),
        "guesses in a block must be distinct"
    );
    debug_assert!(guesses.iter().all(|g| g.x <= full_mask(ep.len())));

    let mut taken = p.atom_names();
    let mut fresh = BTreeSet::new();
    let mut claim = |base: String, taken: &mut BTreeSet<String>| -> String {
        let name = names::fresh(base, taken);
        fresh.insert(name.clone());
        name
    };

    let mut toggles = Vec::new();
    let mut markers = Vec::new();
    for item in ep.items() {
        let tag = names::mangle(item.literal());
        let (marker, on, off) = match item {
            EpItem::NotK(_) => (
                format!("neg_k_{tag}"),
                format!("k0_{tag}"),
                format!("k1_{tag}"),
            ),
            EpItem::M(_) => (format!("m_{tag}"), format!("m1_{tag}"), format!("m0_{tag}")),
        };
        markers.push(Atom::nullary(claim(marker, &mut taken)));
        toggles.push(TogglePair {
            on: Atom::nullary(claim(on, &mut taken)),
            off: Atom::nullary(claim(off, &mut taken)),
        });
    }

    let mut rules = Vec::new();
    let pos = |a: &Atom| BodyElement::objective(a.clone().into(), 0);
    let neg = |a: &Atom| BodyElement::objective(a.clone().into(), 1);

    if guesses.is_empty() {
        // Bare rewrite: no toggle section.
    } else if let [only] = guesses {
        // One guess: toggles are plain facts.
        for (i, t) in toggles.iter().enumerate() {
            let a = if only.contains(i) { &t.on } else { &t.off };
            rules.push(Rule::fact(a.clone().into()));
        }
    } else {
        // Choice cycle, exclusivity, exhaustiveness, then gated toggles.
        let sels: Vec<(Atom, Atom)> = guesses
            .iter()
            .map(|g| {
                (
                    Atom::nullary(claim(format!("sel_{}", g.x), &mut taken)),
                    Atom::nullary(claim(format!("nsel_{}", g.x), &mut taken)),
                )
            })
            .collect();
        for (sel, nsel) in &sels {
            rules.push(Rule::new(vec![sel.clone().into()], vec![neg(nsel)]));
            rules.push(Rule::new(vec![nsel.clone().into()], vec![neg(sel)]));
        }
        for (i, (sel_i, _)) in sels.iter().enumerate() {
            for (sel_j, _) in &sels[i + 1..] {
                rules.push(Rule::constraint(vec![pos(sel_i), pos(sel_j)]));
            }
        }
        rules.push(Rule::constraint(
            sels.iter().map(|(_, nsel)| pos(nsel)).collect(),
        ));
        for (g, (sel, _)) in guesses.iter().zip(&sels) {
            for (i, t) in toggles.iter().enumerate() {
                let a = if g.contains(i) { &t.on } else { &t.off };
                rules.push(Rule::new(vec![a.clone().into()], vec![pos(sel)]));
            }
        }
    }

    for ((item, marker), t) in ep.items().iter().zip(&markers).zip(&toggles) {
        let l = item.literal().clone();
        match item {
            EpItem::NotK(_) => {
                rules.push(Rule::new(vec![marker.clone().into()], vec![pos(&t.on)]));
                rules.push(Rule::new(
                    vec![marker.clone().into()],
                    vec![pos(&t.off), BodyElement::objective(l, 1)],
                ));
            }
            EpItem::M(_) => {
                rules.push(Rule::new(vec![marker.clone().into()], vec![pos(&t.on)]));
                rules.push(Rule::new(
                    vec![marker.clone().into()],
                    vec![pos(&t.off), BodyElement::objective(l, 2)],
                ));
            }
        }
    }

    for r in p.rules() {
        let mut body = Vec::new();
        for e in r.body() {
            match e {
                BodyElement::Objective { .. } => body.push(e.clone()),
                BodyElement::Subjective { atom, neg_depth } => {
                    let item = match atom.modality {
                        Modality::K => EpItem::NotK(atom.literal.clone()),
                        Modality::M => EpItem::M(atom.literal.clone()),
                    };
                    let i = ep
                        .index_of(&item)
                        .expect("subjective atom missing from ep order");
                    let marker = &markers[i];
                    match (atom.modality, *neg_depth) {
                        (Modality::K, 0) => {
                            body.push(neg(marker));
                            body.push(BodyElement::objective(atom.literal.clone(), 0));
                        }
                        (Modality::K, 1) => body.push(pos(marker)),
                        (Modality::M, 0) => body.push(pos(marker)),
                        (Modality::M, 1) => body.push(neg(marker)),
                        _ => unreachable!("parser bounds subjective negation depth to 0 or 1"),
                    }
                }
            }
        }
        rules.push(Rule::new(r.head().to_vec(), body));
    }

    Translation {
        program: Program::new(rules),
        guesses: guesses.to_vec(),
        toggles,
        fresh,
    }
}

impl Translation {
    /// Which guess produced this answer set, read off its toggle atoms.
    pub fn decode_guess(&self, s: &BeliefSet) -> Result<Guess, TranslateError> {
        let mut x = 0u64;
        for (i, t) in self.toggles.iter().enumerate() {
            let on = s.contains(&t.on.clone().into());
            let off = s.contains(&t.off.clone().into());
            match (on, off) {
                (true, false) => x |= 1 << i,
                (false, true) => {}
                (false, false) => {
                    return Err(TranslateError::MissingToggle {
                        index: i,
                        set: s.to_string(),
                    })
                }
                (true, true) => {
                    return Err(TranslateError::ClashingToggles {
                        index: i,
                        set: s.to_string(),
                    })
                }
            }
        }
        Ok(Guess::new(x))
    }

    /// Remove every atom this compilation introduced.
    pub fn strip(&self, s: &BeliefSet) -> BeliefSet {
        s.without(|l| self.fresh.contains(&l.atom.name))
    }

    /// Route each answer set to its guess and strip the bookkeeping.
    /// Guesses whose reduct has no answer sets are absent from the map.
    pub fn aggregate(
        &self,
        sets: &BTreeSet<BeliefSet>,
    ) -> Result<BTreeMap<Guess, BTreeSet<BeliefSet>>, TranslateError> {
        let mut out: BTreeMap<Guess, BTreeSet<BeliefSet>> = BTreeMap::new();
        for s in sets {
            out.entry(self.decode_guess(s)?)
                .or_default()
                .insert(self.strip(s));
        }
        Ok(out)
    }

    /// Aggregate, then keep only guesses whose stripped answer sets
    /// read back the guess itself.
    pub fn verified_views(
        &self,
        ep: &EpOrder,
        sets: &BTreeSet<BeliefSet>,
    ) -> Result<BTreeMap<Guess, BTreeSet<BeliefSet>>, TranslateError> {
        let mut map = self.aggregate(sets)?;
        map.retain(|g, sets| phi_of(ep, sets) == *g);
        Ok(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::Engine;
    use crate::model::{extract_ep, SemanticsMode};
    use crate::parser::parse_elp;
    use crate::semantics::{check_candidate, epistemic_reduct, world_views_oracle};

    fn compile(text: &str, guesses: &[u64]) -> (Program, EpOrder, Translation) {
        let p = parse_elp(text).unwrap();
        let ep = extract_ep(&p);
        let gs: Vec<Guess> = guesses.iter().map(|&x| Guess::new(x)).collect();
        let t = translate(&p, &ep, &gs);
        (p, ep, t)
    }

    #[test]
    fn zero_guess_compilation_is_the_bare_rewrite() {
        let (_, _, t) = compile("a :- M a.", &[]);
        assert_eq!(
            t.program.to_string(),
            "m_a :- m1_a.\nm_a :- m0_a, not not a.\na :- m_a.\n"
        );
        let (_, _, t) = compile("a :- not K b. b :- not K a.", &[]);
        assert_eq!(
            t.program.to_string(),
            "neg_k_b :- k0_b.\nneg_k_b :- k1_b, not b.\n\
             neg_k_a :- k0_a.\nneg_k_a :- k1_a, not a.\n\
             a :- neg_k_b.\nb :- neg_k_a.\n"
        );
    }

    #[test]
    fn single_guess_program_text() {
        let (_, _, t) = compile("a :- not K b. b :- not K a.", &[1]);
        assert_eq!(
            t.program.to_string(),
            "k0_b.\n\
             k1_a.\n\
             neg_k_b :- k0_b.\n\
             neg_k_b :- k1_b, not b.\n\
             neg_k_a :- k0_a.\n\
             neg_k_a :- k1_a, not a.\n\
             a :- neg_k_b.\n\
             b :- neg_k_a.\n"
        );
    }

    #[test]
    fn all_four_element_forms_translate() {
        let (_, _, t) = compile("x :- K a. y :- not K b. z :- M c. w :- not M d.", &[0]);
        assert_eq!(
            t.program.to_string(),
            "k1_a.\n\
             k1_b.\n\
             m0_c.\n\
             m0_d.\n\
             neg_k_a :- k0_a.\n\
             neg_k_a :- k1_a, not a.\n\
             neg_k_b :- k0_b.\n\
             neg_k_b :- k1_b, not b.\n\
             m_c :- m1_c.\n\
             m_c :- m0_c, not not c.\n\
             m_d :- m1_d.\n\
             m_d :- m0_d, not not d.\n\
             x :- not neg_k_a, a.\n\
             y :- neg_k_b.\n\
             z :- m_c.\n\
             w :- not m_d.\n"
        );
    }

    #[test]
    fn classical_negation_gets_mangled_names() {
        let (_, _, t) = compile("p :- not K -q.", &[1]);
        assert_eq!(
            t.program.to_string(),
            "k0_2q.\n\
             neg_k_2q :- k0_2q.\n\
             neg_k_2q :- k1_2q, not -q.\n\
             p :- neg_k_2q.\n"
        );
    }

    #[test]
    fn name_collisions_get_numbered() {
        let (_, _, t) = compile("k0_b. a :- not K b.", &[1]);
        let text = t.program.to_string();
        assert!(
            text.contains("k0_b_2."),
            "toggle must dodge the user atom: {text}"
        );
        assert!(text.contains("neg_k_b :- k0_b_2."), "{text}");
    }

    #[test]
    fn two_guess_block_uses_selectors() {
        let (_, _, t) = compile("a :- not K b. b :- not K a.", &[1, 2]);
        assert_eq!(
            t.program.to_string(),
            "sel_1 :- not nsel_1.\n\
             nsel_1 :- not sel_1.\n\
             sel_2 :- not nsel_2.\n\
             nsel_2 :- not sel_2.\n\
             :- sel_1, sel_2.\n\
             :- nsel_1, nsel_2.\n\
             k0_b :- sel_1.\n\
             k1_a :- sel_1.\n\
             k1_b :- sel_2.\n\
             k0_a :- sel_2.\n\
             neg_k_b :- k0_b.\n\
             neg_k_b :- k1_b, not b.\n\
             neg_k_a :- k0_a.\n\
             neg_k_a :- k1_a, not a.\n\
             a :- neg_k_b.\n\
             b :- neg_k_a.\n"
        );
    }

    #[test]
    fn block_answer_sets_route_back_to_their_guesses() {
        let (_, ep, t) = compile("a :- not K b. b :- not K a.", &[1, 2]);
        let solved = Engine::internal().answer_sets(&t.program).unwrap().sets;
        let map = t.verified_views(&ep, &solved).unwrap();
        let shown: Vec<(u64, Vec<String>)> = map
            .into_iter()
            .map(|(g, sets)| (g.x, sets.iter().map(|s| s.to_string()).collect()))
            .collect();
        assert_eq!(
            shown,
            vec![(1, vec!["{ a }".into()]), (2, vec!["{ b }".into()])]
        );
    }

    #[test]
    fn unverified_guess_is_dropped_by_verification() {
        // Guess 0 for this program solves to the empty set and {a}, which reads back
        // M a as holding, so verification rejects it.
        let (_, ep, t) = compile("a :- M a.", &[0]);
        let solved = Engine::internal().answer_sets(&t.program).unwrap().sets;
        let aggregated = t.aggregate(&solved).unwrap();
        assert_eq!(aggregated.len(), 1);
        assert_eq!(aggregated[&Guess::new(0)].len(), 2);
        let verified = t.verified_views(&ep, &solved).unwrap();
        assert!(verified.is_empty());
    }

    #[test]
    fn block_route_matches_per_guess_reducts() {
        // The compiled block must reproduce, per guess, exactly the
        // answer sets of that guess's reduct.
        let texts = [
            "a :- not K b. b :- not K a.",
            "a :- M a.",
            "a :- K b. b :- K a. a | b.",
            "x :- K a. y :- not K b. z :- M c. w :- not M d. a | d.",
            "p :- not K -q. -q | q.",
        ];
        // 2^4 guesses in one block need more head atoms than the
        // default cap allows.
        let engine = Engine::Internal { cap: 64 };
        for text in texts {
            let p = parse_elp(text).unwrap();
            let ep = extract_ep(&p);
            let all: Vec<Guess> = (0..=full_mask(ep.len())).map(Guess::new).collect();
            let t = translate(&p, &ep, &all);
            let solved = engine.answer_sets(&t.program).unwrap().sets;
            let mut aggregated = t.aggregate(&solved).unwrap();
            for g in &all {
                let direct = engine
                    .answer_sets(&epistemic_reduct(&p, &ep, *g))
                    .unwrap()
                    .sets;
                let via_block = aggregated.remove(g).unwrap_or_default();
                assert_eq!(via_block, direct, "program: {text}, guess {g}");
            }
            assert!(aggregated.is_empty(), "stray guesses decoded for {text}");
        }
    }

    #[test]
    fn block_verification_matches_the_oracle() {
        let texts = ["a :- not K b. b :- not K a.", "a :- K b. b :- K a. a | b."];
        let engine = Engine::internal();
        for text in texts {
            let p = parse_elp(text).unwrap();
            let ep = extract_ep(&p);
            let all: Vec<Guess> = (0..=full_mask(ep.len())).map(Guess::new).collect();
            let t = translate(&p, &ep, &all);
            let solved = engine.answer_sets(&t.program).unwrap().sets;
            let verified = t.verified_views(&ep, &solved).unwrap();
            let oracle = world_views_oracle(&p, SemanticsMode::Kwbgz15, &engine).unwrap();
            assert_eq!(verified.len(), oracle.len(), "program: {text}");
            for wv in oracle {
                assert_eq!(verified[&wv.phi], wv.belief_sets, "program: {text}");
            }
        }
    }

    #[test]
    fn single_guess_route_agrees_with_check_candidate() {
        let text = "fairGPA(s1) | highGPA(s1). eligible(s1) :- highGPA(s1). \
                    interview(s1) :- not K eligible(s1), not K -eligible(s1).";
        let p = parse_elp(text).unwrap();
        let ep = extract_ep(&p);
        let engine = Engine::internal();
        for x in 0..=full_mask(ep.len()) {
            let g = Guess::new(x);
            let t = translate(&p, &ep, &[g]);
            let solved = engine.answer_sets(&t.program).unwrap().sets;
            let via_block = t.verified_views(&ep, &solved).unwrap().remove(&g);
            let direct = check_candidate(&p, &ep, g, &engine).unwrap();
            assert_eq!(via_block, direct, "guess {x}");
        }
    }

    #[test]
    fn plain_asp_input_translates_to_itself() {
        let (p, ep, t) = compile("a | b. c :- a, not b.", &[0]);
        assert!(ep.is_empty());
        assert_eq!(t.program, p);
        let solved = Engine::internal().answer_sets(&t.program).unwrap().sets;
        let map = t.aggregate(&solved).unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(map[&Guess::new(0)].len(), 2);
    }

    #[test]
    fn decode_rejects_foreign_sets() {
        let (_, _, t) = compile("a :- not K b.", &[1]);
        let foreign = BeliefSet::new([Atom::nullary("a").into()]).unwrap();
        assert!(matches!(
            t.decode_guess(&foreign),
            Err(TranslateError::MissingToggle { index: 0, .. })
        ));
    }
}
