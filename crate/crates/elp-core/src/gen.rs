//! Benchmark and random program generators.
//!
//! The scholarship benchmark scales the guess space linearly with the
//! number of students while keeping one obvious world view, which
//! makes it the standard fixture for comparing search algorithms. The
//! random generators drive differential tests; they are seeded, so a
//! failing program can be regenerated from its seed alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{
    Atom, BodyElement, Constant, Modality, ObjectiveLiteral, Program, Rule, SubjectiveAtom,
};

/// Scholarship eligibility program over `n` students. Each student
/// contributes one disjunctive guess over their GPA band and one
/// interview rule that fires while their eligibility is undecided,
/// for two epistemic negations per student.
pub fn eligible(n: usize) -> Program {
    let mut rules = Vec::new();
    for i in 1..=n {
        let s = Constant::from(format!("s{i}"));
        let fair = Atom::new("fairGPA", vec![s.clone()]);
        let high = Atom::new("highGPA", vec![s.clone()]);
        let elig = Atom::new("eligible", vec![s.clone()]);
        let interview = Atom::new("interview", vec![s]);
        rules.push(Rule::new(vec![fair.into(), high.clone().into()], vec![]));
        rules.push(Rule::new(
            vec![elig.clone().into()],
            vec![BodyElement::objective(high.into(), 0)],
        ));
        let know = |literal: ObjectiveLiteral| {
            BodyElement::subjective(
                SubjectiveAtom {
                    modality: Modality::K,
                    literal,
                },
                1,
            )
        };
        rules.push(Rule::new(
            vec![interview.into()],
            vec![
                know(elig.clone().into()),
                know(ObjectiveLiteral::negative(elig)),
            ],
        ));
    }
    Program::new(rules)
}

const POOL: [&str; 4] = ["a", "b", "c", "d"];

fn random_literal(rng: &mut ChaCha8Rng, atoms: usize, classical: bool) -> ObjectiveLiteral {
    let atom = Atom::nullary(POOL[rng.gen_range(0..atoms)]);
    // Drawn even when disabled so both corpora share rule shapes.
    if rng.gen_bool(0.25) && classical {
        ObjectiveLiteral::negative(atom)
    } else {
        atom.into()
    }
}

/// Random ground ELP: at most four atoms, six rules, and three
/// subjective body elements, so the guess space stays enumerable.
/// Equal seeds give equal programs. Literals stay positive; see
/// [`random_elp_with_classical_negation`] for the signed variant.
///
/// A third of the programs open with a mutual ignorance pair, two
/// atoms each defended by the other's unknownness. Purely uniform
/// rules almost never produce incomparable verified guesses, so
/// without the motif programs with several world views would be too
/// rare to exercise maximality pruning.
pub fn random_elp(seed: u64) -> Program {
    random_elp_program(seed, false)
}

/// Same distribution as [`random_elp`] except a quarter of the
/// literal draws come out strongly negated.
pub fn random_elp_with_classical_negation(seed: u64) -> Program {
    random_elp_program(seed, true)
}

fn random_elp_program(seed: u64, classical: bool) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = rng.gen_range(2..=POOL.len());
    let mut subjective_left = 3usize;
    let mut rules = Vec::new();
    if rng.gen_bool(1.0 / 3.0) {
        let i = rng.gen_range(0..atoms);
        let j = (i + 1 + rng.gen_range(0..atoms - 1)) % atoms;
        let unknown = |name: &str| {
            BodyElement::subjective(
                SubjectiveAtom {
                    modality: Modality::K,
                    literal: Atom::nullary(name).into(),
                },
                1,
            )
        };
        rules.push(Rule::new(
            vec![Atom::nullary(POOL[i]).into()],
            vec![unknown(POOL[j])],
        ));
        rules.push(Rule::new(
            vec![Atom::nullary(POOL[j]).into()],
            vec![unknown(POOL[i])],
        ));
        subjective_left -= 2;
    }
    let n_rules = rng.gen_range(usize::from(rules.is_empty())..=6 - rules.len());
    for _ in 0..n_rules {
        let mut head = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            head.push(random_literal(&mut rng, atoms, classical));
        }
        let min_body = usize::from(head.is_empty());
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(min_body..=3) {
            if subjective_left > 0 && rng.gen_bool(0.4) {
                subjective_left -= 1;
                let modality = if rng.gen_bool(0.5) {
                    Modality::K
                } else {
                    Modality::M
                };
                let literal = random_literal(&mut rng, atoms, classical);
                body.push(BodyElement::subjective(
                    SubjectiveAtom { modality, literal },
                    rng.gen_range(0..=1),
                ));
            } else {
                body.push(BodyElement::objective(
                    random_literal(&mut rng, atoms, classical),
                    rng.gen_range(0..=1),
                ));
            }
        }
        rules.push(Rule::new(head, body));
    }
    Program::new(rules)
}

/// Random plain ASP program in the same shape as [`random_elp`] but
/// without subjective atoms and with occasional doubled negation.
pub fn random_asp(seed: u64) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = rng.gen_range(2..=POOL.len());
    let n_rules = rng.gen_range(1..=6);
    let mut rules = Vec::new();
    for _ in 0..n_rules {
        let mut head = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            head.push(random_literal(&mut rng, atoms, true));
        }
        let min_body = usize::from(head.is_empty());
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(min_body..=3) {
            let neg_depth = match rng.gen_range(0..10) {
                0 => 2,
                1..=4 => 1,
                _ => 0,
            };
            body.push(BodyElement::objective(
                random_literal(&mut rng, atoms, true),
                neg_depth,
            ));
        }
        rules.push(Rule::new(head, body));
    }
    let p = Program::new(rules);
    debug_assert!(p.is_asp());
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::extract_ep;
    use crate::parser::{parse_asp, parse_elp};

    #[test]
    fn one_student_program_text() {
        assert_eq!(
            eligible(1).to_string(),
            "fairGPA(s1) | highGPA(s1).\n\
             eligible(s1) :- highGPA(s1).\n\
             interview(s1) :- not K eligible(s1), not K -eligible(s1).\n"
        );
        assert!(eligible(0).rules().is_empty());
    }

    #[test]
    fn student_count_scales_the_guess_space() {
        for n in [1, 2, 5, 10] {
            let ep = extract_ep(&eligible(n));
            assert_eq!(ep.len(), 2 * n);
        }
        let ep = extract_ep(&eligible(2));
        let items: Vec<String> = ep.items().iter().map(|i| i.to_string()).collect();
        assert_eq!(
            items,
            vec![
                "not K eligible(s1)",
                "not K -eligible(s1)",
                "not K eligible(s2)",
                "not K -eligible(s2)",
            ]
        );
    }

    #[test]
    fn every_student_gets_interviewed() {
        use crate::asp::Engine;
        use crate::search::{solve, SearchConfig};
        let p = eligible(2);
        let outcome = solve(&p, &Engine::internal(), &SearchConfig::default()).unwrap();
        assert_eq!(outcome.world_views.len(), 1);
        let wv = &outcome.world_views[0];
        assert_eq!(wv.phi.x, 0b1111);
        assert_eq!(wv.belief_sets.len(), 4);
        for s in &wv.belief_sets {
            for i in 1..=2 {
                let atom = Atom::new("interview", vec![Constant::from(format!("s{i}"))]);
                assert!(s.contains(&atom.into()));
            }
        }
        assert_eq!(outcome.stats.solver_calls, 1);
    }

    #[test]
    fn seeds_determine_programs() {
        for seed in 0..20 {
            assert_eq!(random_elp(seed), random_elp(seed));
            assert_eq!(random_asp(seed), random_asp(seed));
        }
        let distinct: std::collections::BTreeSet<String> =
            (0..20).map(|s| random_elp(s).to_string()).collect();
        assert!(
            distinct.len() > 10,
            "seeds should mostly differ: {}",
            distinct.len()
        );
    }

    #[test]
    fn random_programs_round_trip_through_their_text() {
        for seed in 0..100 {
            let p = random_elp(seed);
            assert!(extract_ep(&p).len() <= 3, "seed {seed}");
            let reparsed = parse_elp(&p.to_string()).unwrap();
            assert_eq!(p, reparsed, "seed {seed}");

            let p = random_asp(seed);
            let reparsed = parse_asp(&p.to_string()).unwrap();
            assert_eq!(p, reparsed, "seed {seed}");
        }
    }
}
