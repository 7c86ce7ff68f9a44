//! Answer set machinery for plain ASP programs: the source-level
//! transformations that strip classical and doubled default negation,
//! the Gelfond-Lifschitz reduct, and two interchangeable solving back
//! ends (a built-in enumerator and an external solver subprocess).

mod engine;
mod external;

pub use external::{external_answer_sets, SolverAdapterConfig};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{Atom, BeliefSet, BodyElement, ObjectiveLiteral, Program, Rule};
use crate::names;

/// Head-atom limit for the built-in enumerator. Programs beyond it are
/// rejected rather than solved slowly.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 22;

#[derive(Debug, Error)]
pub enum AspError {
    #[error("program contains subjective literals; expected plain ASP")]
    NotAsp,
    #[error(
        "{atoms} head atoms exceed the brute-force cap of {cap}; raise the cap or use an external solver"
    )]
    CapacityExceeded { atoms: usize, cap: usize },
    #[error("external solver command is empty")]
    AdapterCommand,
    #[error("failed to start external solver '{command}': {source}")]
    AdapterSpawn {
        command: String,
        #[source]
        source: std::io::Error,
    },
    #[error("external solver timed out after {seconds:.1}s")]
    AdapterTimeout { seconds: f64 },
    #[error("external solver exited with unexpected status {status}; stderr: {stderr}")]
    AdapterStatus { status: String, stderr: String },
    #[error("cannot parse external solver output: {0}")]
    AdapterOutput(String),
}

/// Where a result came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineSource {
    Internal,
    External,
}

/// Answer sets of one solver call, sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerSetResult {
    pub sets: BTreeSet<BeliefSet>,
    pub source: EngineSource,
}

/// A solving back end. Both variants are cheap to clone, so concurrent
/// searches hand each worker its own copy.
#[derive(Debug, Clone)]
pub enum Engine {
    Internal { cap: usize },
    External(SolverAdapterConfig),
}

impl Engine {
    pub fn internal() -> Self {
        Engine::Internal {
            cap: DEFAULT_BRUTE_FORCE_CAP,
        }
    }

    pub fn answer_sets(&self, p: &Program) -> Result<AnswerSetResult, AspError> {
        match self {
            Engine::Internal { cap } => answer_sets(p, *cap),
            Engine::External(cfg) => external_answer_sets(p, cfg),
        }
    }
}

/// Mapping from classically negated literals to their replacement atoms.
#[derive(Debug, Clone, Default)]
pub struct NegationMap {
    forward: BTreeMap<ObjectiveLiteral, Atom>,
    reverse: BTreeMap<Atom, ObjectiveLiteral>,
}

impl NegationMap {
    pub fn decode(&self, atom: &Atom) -> Option<&ObjectiveLiteral> {
        self.reverse.get(atom)
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }
}

/// Replace every `-a` with a fresh atom and, for each atom occurring in
/// both signs, add a constraint forbidding the pair. The result uses no
/// classical negation and has the same answer sets modulo the renaming.
pub fn eliminate_classical_negation(p: &Program) -> (Program, NegationMap) {
    let mut taken = p.atom_names();
    let mut map = NegationMap::default();
    let universe = p.universe();

    for l in &universe {
        if l.strong_neg {
            let name = names::fresh(format!("neg_{}", l.atom.name), &mut taken);
            let fresh = Atom::new(name, l.atom.args.clone());
            map.forward.insert(l.clone(), fresh.clone());
            map.reverse.insert(fresh, l.clone());
        }
    }

    let rename = |l: &ObjectiveLiteral| -> ObjectiveLiteral {
        if l.strong_neg {
            ObjectiveLiteral::positive(map.forward[l].clone())
        } else {
            l.clone()
        }
    };

    let mut rules: Vec<Rule> = p
        .rules()
        .iter()
        .map(|r| {
            Rule::new(
                r.head().iter().map(rename).collect(),
                r.body()
                    .iter()
                    .map(|e| match e {
                        BodyElement::Objective { literal, neg_depth } => {
                            BodyElement::objective(rename(literal), *neg_depth)
                        }
                        BodyElement::Subjective { .. } => {
                            unreachable!("transformation requires plain ASP")
                        }
                    })
                    .collect(),
            )
        })
        .collect();

    // One consistency constraint per atom present in both signs.
    for l in &universe {
        if l.strong_neg && universe.contains(&l.complement()) {
            rules.push(Rule::constraint(vec![
                BodyElement::objective(l.complement(), 0),
                BodyElement::objective(rename(l), 0),
            ]));
        }
    }

    (Program::new(rules), map)
}

/// Replace every `not not l` with `not l'` for a fresh `l'` defined by
/// `l' :- not l`. Answer sets are preserved modulo the fresh atoms.
pub fn remove_nested_negation(p: &Program) -> (Program, BTreeSet<Atom>) {
    let mut taken = p.atom_names();
    let mut fresh_for: BTreeMap<ObjectiveLiteral, Atom> = BTreeMap::new();

    for r in p.rules() {
        for e in r.body() {
            if let BodyElement::Objective {
                literal,
                neg_depth: 2,
            } = e
            {
                if !fresh_for.contains_key(literal) {
                    let name = names::fresh(format!("not_{}", names::mangle(literal)), &mut taken);
                    fresh_for.insert(literal.clone(), Atom::new(name, literal.atom.args.clone()));
                }
            }
        }
    }

    let mut rules: Vec<Rule> = p
        .rules()
        .iter()
        .map(|r| {
            Rule::new(
                r.head().to_vec(),
                r.body()
                    .iter()
                    .map(|e| match e {
                        BodyElement::Objective {
                            literal,
                            neg_depth: 2,
                        } => BodyElement::objective(
                            ObjectiveLiteral::positive(fresh_for[literal].clone()),
                            1,
                        ),
                        other => other.clone(),
                    })
                    .collect(),
            )
        })
        .collect();

    for (l, fresh) in &fresh_for {
        rules.push(Rule::new(
            vec![ObjectiveLiteral::positive(fresh.clone())],
            vec![BodyElement::objective(l.clone(), 1)],
        ));
    }

    (Program::new(rules), fresh_for.into_values().collect())
}

/// Gelfond-Lifschitz reduct with respect to `s`: rules whose negative
/// body intersects `s` are dropped, remaining negative elements removed.
/// Requires negation depth <= 1.
pub fn gl_reduct(p: &Program, s: &BeliefSet) -> Program {
    let mut rules = Vec::new();
    'rules: for r in p.rules() {
        let mut body = Vec::new();
        for e in r.body() {
            match e {
                BodyElement::Objective {
                    literal,
                    neg_depth: 0,
                } => {
                    body.push(BodyElement::objective(literal.clone(), 0));
                }
                BodyElement::Objective {
                    literal,
                    neg_depth: 1,
                } => {
                    if s.contains(literal) {
                        continue 'rules;
                    }
                }
                other => panic!("gl_reduct on unsupported body element {other}"),
            }
        }
        rules.push(Rule::new(r.head().to_vec(), body));
    }
    Program::new(rules)
}

/// Classical satisfaction of a positive program: every rule whose body
/// holds in `s` has a head literal in `s`.
pub fn is_model(p: &Program, s: &BeliefSet) -> bool {
    debug_assert!(p.is_positive(), "is_model expects a positive program");
    p.rules().iter().all(|r| {
        let body_holds = r.body().iter().all(|e| match e {
            BodyElement::Objective {
                literal,
                neg_depth: 0,
            } => s.contains(literal),
            _ => false,
        });
        !body_holds || r.head().iter().any(|l| s.contains(l))
    })
}

/// Answer sets of a ground ASP program via the built-in enumerator.
///
/// Classical negation and doubled default negation are compiled away
/// first; the returned belief sets are over the original vocabulary.
/// `cap` bounds the number of distinct head atoms searched over.
pub fn answer_sets(p: &Program, cap: usize) -> Result<AnswerSetResult, AspError> {
    if !p.is_asp() {
        return Err(AspError::NotAsp);
    }
    let (p1, neg_map) = eliminate_classical_negation(p);
    let (p2, nested) = remove_nested_negation(&p1);
    let models = engine::stable_models(&p2, cap)?;

    let mut sets = BTreeSet::new();
    for m in models {
        let literals =
            m.into_iter()
                .filter(|a| !nested.contains(a))
                .map(|a| match neg_map.decode(&a) {
                    Some(l) => l.clone(),
                    None => ObjectiveLiteral::positive(a),
                });
        // Consistency constraints added above make complementary pairs
        // unsatisfiable, so construction cannot fail.
        sets.insert(BeliefSet::new(literals).expect("constraints keep models consistent"));
    }
    Ok(AnswerSetResult {
        sets,
        source: EngineSource::Internal,
    })
}
