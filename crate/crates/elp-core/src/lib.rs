//! Solver library for ground epistemic logic programs.
//!
//! An epistemic logic program extends a disjunctive ASP program with
//! subjective atoms `K l` ("l holds in every belief set") and `M l`
//! ("l holds in some belief set") in rule bodies. Its meaning is given
//! by world views: sets of belief sets that verify a guess about which
//! epistemic negations hold.
//!
//! The pipeline in this crate:
//!
//! * [`parser`] reads ground ELP or plain ASP text.
//! * [`model`] holds the shared data types, including the bitvector
//!   encoding of guesses over the epistemic negations of a program.
//! * [`asp`] enumerates answer sets, either with the built-in
//!   enumerator or through an external solver subprocess.
//! * [`semantics`] applies reducts to turn a guess into candidate
//!   belief sets and checks whether the guess is verified.
//! * [`translate`] compiles an ELP plus a block of guesses into one
//!   ASP program whose answer sets cover all those guesses at once.
//! * [`search`] walks the guess space level by level (or naively) to
//!   collect world views, optionally pruning, grouping, and running
//!   groups on worker threads.
//! * [`gen`] produces benchmark and random test programs.
//! * [`diff`] cross-checks every search configuration against a
//!   reference enumeration.

pub mod asp;
pub mod diff;
pub mod gen;
pub mod model;
mod names;
pub mod parser;
pub mod search;
pub mod semantics;
pub mod translate;

pub use asp::{
    external_answer_sets, AnswerSetResult, AspError, Engine, SolverAdapterConfig,
    DEFAULT_BRUTE_FORCE_CAP,
};
pub use diff::{check_program, DiffError, Disagreement};
pub use gen::{eligible, random_asp, random_elp, random_elp_with_classical_negation};
pub use model::{
    extract_ep, full_mask, guess_to_phi, phi_to_guess, Atom, BeliefSet, BodyElement, Constant,
    EpItem, EpOrder, Guess, Modality, ModelError, ObjectiveLiteral, Program, Rule, SemanticsMode,
    SubjectiveAtom, WorldView,
};
pub use parser::{parse_asp, parse_elp, ParseError};
pub use search::{solve, Algorithm, Route, SearchConfig, SearchError, SearchOutcome, SearchStats};
pub use semantics::{
    epistemic_reduct, modal_reduct, phi_of, world_view_fixpoint, world_views_oracle, SemanticsError,
};
pub use translate::{translate, TranslateError, Translation};
