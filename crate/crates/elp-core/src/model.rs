//! Ground terms, rules, and programs for epistemic logic programs (ELPs),
//! plus the bit-level encoding of epistemic guesses.
//!
//! An ELP rule may carry subjective body elements `K l` ("l is in every
//! belief set") and `M l` ("l is in some belief set"), optionally under
//! default negation. A plain ASP rule is the special case with no
//! subjective elements. Everything here is ground: no variables.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Constant term: a symbolic or numeric constant, stored textually.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constant(pub String);

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<T: Into<String>> From<T> for Constant {
    fn from(s: T) -> Self {
        Constant(s.into())
    }
}

/// Ground atom: predicate name applied to constant arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: String,
    pub args: Vec<Constant>,
}

impl Atom {
    pub fn new(name: impl Into<String>, args: Vec<Constant>) -> Self {
        Atom {
            name: name.into(),
            args,
        }
    }

    pub fn nullary(name: impl Into<String>) -> Self {
        Atom {
            name: name.into(),
            args: Vec::new(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Atom or its classical (strong) negation `-a`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectiveLiteral {
    pub atom: Atom,
    pub strong_neg: bool,
}

impl ObjectiveLiteral {
    pub fn positive(atom: Atom) -> Self {
        ObjectiveLiteral {
            atom,
            strong_neg: false,
        }
    }

    pub fn negative(atom: Atom) -> Self {
        ObjectiveLiteral {
            atom,
            strong_neg: true,
        }
    }

    /// The literal with opposite classical sign.
    pub fn complement(&self) -> Self {
        ObjectiveLiteral {
            atom: self.atom.clone(),
            strong_neg: !self.strong_neg,
        }
    }
}

impl From<Atom> for ObjectiveLiteral {
    fn from(atom: Atom) -> Self {
        ObjectiveLiteral::positive(atom)
    }
}

impl fmt::Display for ObjectiveLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.strong_neg {
            write!(f, "-")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// Modal operator of a subjective atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    K,
    M,
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modality::K => write!(f, "K"),
            Modality::M => write!(f, "M"),
        }
    }
}

/// Subjective atom `K l` or `M l`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubjectiveAtom {
    pub modality: Modality,
    pub literal: ObjectiveLiteral,
}

impl fmt::Display for SubjectiveAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.modality, self.literal)
    }
}

/// One body element of a rule.
///
/// `neg_depth` counts leading default negations: 0..=2 for objective
/// literals ("l", "not l", "not not l"), 0..=1 for subjective atoms.
/// Depth 2 on objective literals only ever appears in ASP programs
/// produced by reducts; the ELP surface syntax rejects it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BodyElement {
    Objective {
        literal: ObjectiveLiteral,
        neg_depth: u8,
    },
    Subjective {
        atom: SubjectiveAtom,
        neg_depth: u8,
    },
}

impl BodyElement {
    pub fn objective(literal: ObjectiveLiteral, neg_depth: u8) -> Self {
        debug_assert!(neg_depth <= 2);
        BodyElement::Objective { literal, neg_depth }
    }

    pub fn subjective(atom: SubjectiveAtom, neg_depth: u8) -> Self {
        debug_assert!(neg_depth <= 1);
        BodyElement::Subjective { atom, neg_depth }
    }

    pub fn is_subjective(&self) -> bool {
        matches!(self, BodyElement::Subjective { .. })
    }

    pub fn neg_depth(&self) -> u8 {
        match self {
            BodyElement::Objective { neg_depth, .. } => *neg_depth,
            BodyElement::Subjective { neg_depth, .. } => *neg_depth,
        }
    }
}

impl fmt::Display for BodyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.neg_depth() {
            write!(f, "not ")?;
        }
        match self {
            BodyElement::Objective { literal, .. } => write!(f, "{literal}"),
            BodyElement::Subjective { atom, .. } => write!(f, "{atom}"),
        }
    }
}

/// Rule with disjunctive head and mixed body. An empty head is a
/// constraint; an empty body makes the rule a fact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    head: Vec<ObjectiveLiteral>,
    body: Vec<BodyElement>,
}

impl Rule {
    /// Duplicate head literals are collapsed, keeping first positions.
    pub fn new(head: Vec<ObjectiveLiteral>, body: Vec<BodyElement>) -> Self {
        let mut seen = BTreeSet::new();
        let head = head
            .into_iter()
            .filter(|l| seen.insert(l.clone()))
            .collect();
        Rule { head, body }
    }

    pub fn fact(literal: ObjectiveLiteral) -> Self {
        Rule::new(vec![literal], Vec::new())
    }

    pub fn constraint(body: Vec<BodyElement>) -> Self {
        Rule::new(Vec::new(), body)
    }

    pub fn head(&self) -> &[ObjectiveLiteral] {
        &self.head
    }

    pub fn body(&self) -> &[BodyElement] {
        &self.body
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty() && !self.head.is_empty()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.head.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{l}")?;
        }
        if !self.body.is_empty() {
            if !self.head.is_empty() {
                write!(f, " ")?;
            }
            write!(f, ":- ")?;
            for (i, e) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, ".")
    }
}

/// Ground program: an ordered list of rules.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Program {
    rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn push(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    pub fn extend(&mut self, rules: impl IntoIterator<Item = Rule>) {
        self.rules.extend(rules);
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// True when no rule has a subjective body element.
    pub fn is_asp(&self) -> bool {
        self.rules
            .iter()
            .all(|r| r.body().iter().all(|e| !e.is_subjective()))
    }

    /// True when additionally no body element is default-negated.
    pub fn is_positive(&self) -> bool {
        self.is_asp()
            && self
                .rules
                .iter()
                .all(|r| r.body().iter().all(|e| e.neg_depth() == 0))
    }

    /// All distinct objective literals occurring anywhere in the program.
    pub fn universe(&self) -> BTreeSet<ObjectiveLiteral> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            out.extend(r.head().iter().cloned());
            for e in r.body() {
                match e {
                    BodyElement::Objective { literal, .. } => {
                        out.insert(literal.clone());
                    }
                    BodyElement::Subjective { atom, .. } => {
                        out.insert(atom.literal.clone());
                    }
                }
            }
        }
        out
    }

    /// All distinct atom names occurring anywhere (ignoring sign and args).
    pub fn atom_names(&self) -> BTreeSet<String> {
        self.universe().into_iter().map(|l| l.atom.name).collect()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromIterator<Rule> for Program {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        Program::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("belief set contains both {lit} and its classical complement")]
    InconsistentBeliefSet { lit: String },
    #[error("guess {x} out of range for {n} epistemic negations")]
    GuessOutOfRange { x: u64, n: usize },
}

/// Consistent set of objective literals: one candidate belief set.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BeliefSet {
    literals: BTreeSet<ObjectiveLiteral>,
}

impl BeliefSet {
    pub fn empty() -> Self {
        BeliefSet::default()
    }

    /// Rejects sets holding a literal together with its complement.
    pub fn new(literals: impl IntoIterator<Item = ObjectiveLiteral>) -> Result<Self, ModelError> {
        let literals: BTreeSet<_> = literals.into_iter().collect();
        for l in &literals {
            if l.strong_neg && literals.contains(&l.complement()) {
                return Err(ModelError::InconsistentBeliefSet {
                    lit: l.complement().to_string(),
                });
            }
        }
        Ok(BeliefSet { literals })
    }

    pub fn contains(&self, l: &ObjectiveLiteral) -> bool {
        self.literals.contains(l)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ObjectiveLiteral> {
        self.literals.iter()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Same set without the literals `drop` selects.
    pub fn without(&self, drop: impl Fn(&ObjectiveLiteral) -> bool) -> BeliefSet {
        BeliefSet {
            literals: self.literals.iter().filter(|l| !drop(l)).cloned().collect(),
        }
    }
}

impl fmt::Display for BeliefSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{ ")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, " }}")
    }
}

/// One epistemic negation from Ep(P): `not K l` or `M l`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EpItem {
    NotK(ObjectiveLiteral),
    M(ObjectiveLiteral),
}

impl EpItem {
    pub fn literal(&self) -> &ObjectiveLiteral {
        match self {
            EpItem::NotK(l) | EpItem::M(l) => l,
        }
    }
}

impl fmt::Display for EpItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpItem::NotK(l) => write!(f, "not K {l}"),
            EpItem::M(l) => write!(f, "M {l}"),
        }
    }
}

/// The epistemic negations of a program in first-occurrence order.
///
/// Item i (1-based in prose, 0-based in code) maps to bit i of a guess;
/// bit numbering puts item 1 at the least significant bit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EpOrder {
    items: Vec<EpItem>,
}

impl EpOrder {
    pub fn new(items: Vec<EpItem>) -> Self {
        debug_assert_eq!(
            items.iter().collect::<BTreeSet<_>>().len(),
            items.len(),
            "ep items must be distinct"
        );
        EpOrder { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[EpItem] {
        &self.items
    }

    pub fn index_of(&self, item: &EpItem) -> Option<usize> {
        self.items.iter().position(|i| i == item)
    }
}

/// Every subjective atom contributes one epistemic negation: `K l`
/// (negated or not) yields `not K l`, and `M l` yields `M l` itself.
/// Items are deduplicated and kept in first textual occurrence order.
pub fn extract_ep(p: &Program) -> EpOrder {
    let mut items = Vec::new();
    let mut seen = BTreeSet::new();
    for r in p.rules() {
        for e in r.body() {
            if let BodyElement::Subjective { atom, .. } = e {
                let item = match atom.modality {
                    Modality::K => EpItem::NotK(atom.literal.clone()),
                    Modality::M => EpItem::M(atom.literal.clone()),
                };
                if seen.insert(item.clone()) {
                    items.push(item);
                }
            }
        }
    }
    EpOrder::new(items)
}

/// Subset of Ep encoded as an integer: bit i set means item i is in Phi.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Guess {
    pub x: u64,
}

impl Guess {
    pub fn new(x: u64) -> Self {
        Guess { x }
    }

    pub fn popcount(&self) -> u32 {
        self.x.count_ones()
    }

    pub fn contains(&self, index: usize) -> bool {
        index < 64 && self.x >> index & 1 == 1
    }

    /// Strict subset on the encoded sets.
    pub fn is_strict_subset(&self, other: &Guess) -> bool {
        self.x & other.x == self.x && self.x != other.x
    }
}

impl fmt::Display for Guess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.x)
    }
}

/// Bitmask covering the lowest `n` bits, valid for n <= 64.
pub fn full_mask(n: usize) -> u64 {
    debug_assert!(n <= 64);
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Number of set bits. Mirrors the machine instruction on u64.
pub fn popcount(x: u64) -> u32 {
    x.count_ones()
}

/// Decode a guess into the epistemic negations it selects.
pub fn guess_to_phi(g: Guess, e: &EpOrder) -> Result<Vec<EpItem>, ModelError> {
    if e.len() < 64 && g.x > full_mask(e.len()) {
        return Err(ModelError::GuessOutOfRange { x: g.x, n: e.len() });
    }
    Ok(e.items()
        .iter()
        .enumerate()
        .filter(|(i, _)| g.contains(*i))
        .map(|(_, item)| item.clone())
        .collect())
}

/// Inverse of [`guess_to_phi`]: items not in `e` are an error.
pub fn phi_to_guess(phi: &[EpItem], e: &EpOrder) -> Result<Guess, ModelError> {
    let mut x = 0u64;
    for item in phi {
        match e.index_of(item) {
            Some(i) => x |= 1 << i,
            None => return Err(ModelError::GuessOutOfRange { x: 0, n: e.len() }),
        }
    }
    Ok(Guess::new(x))
}

/// Non-empty set of belief sets paired with the guess it verifies.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WorldView {
    pub phi: Guess,
    pub belief_sets: BTreeSet<BeliefSet>,
}

impl WorldView {
    pub fn new(phi: Guess, belief_sets: BTreeSet<BeliefSet>) -> Self {
        debug_assert!(!belief_sets.is_empty(), "world view must be non-empty");
        WorldView { phi, belief_sets }
    }
}

/// Which world views a run reports: all verifiable guesses, or only the
/// subset-maximal ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemanticsMode {
    /// Subset-maximal verifiable guesses only.
    Se16,
    /// Every verifiable guess.
    Kwbgz15,
}

impl fmt::Display for SemanticsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticsMode::Se16 => write!(f, "se16"),
            SemanticsMode::Kwbgz15 => write!(f, "kwbgz15"),
        }
    }
}
