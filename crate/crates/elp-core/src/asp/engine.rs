//! Built-in stable model enumerator.
//!
//! Exhaustive search over the candidate space of head atoms (atoms never
//! occurring in a head are false in every stable model), organized as
//! branch-and-propagate. Propagation only prunes assignments that cannot
//! extend to a stable model; every surviving total assignment is still
//! checked directly against the definition: it must be a model of the
//! program and a minimal model of its reduct. Input must be free of
//! classical negation and of doubled default negation.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::AspError;
use crate::model::{Atom, BodyElement, Program};

const UNKNOWN: i8 = -1;
const FALSE: i8 = 0;
const TRUE: i8 = 1;

struct IRule {
    head: Vec<u32>,
    pos: Vec<u32>,
    neg: Vec<u32>,
}

struct Search<'a> {
    rules: &'a [IRule],
    val: Vec<i8>,
    trail: Vec<u32>,
    head_occ: Vec<Vec<u32>>,
    pos_occ: Vec<Vec<u32>>,
    neg_occ: Vec<Vec<u32>>,
}

impl Search<'_> {
    fn body_falsified(&self, r: &IRule) -> bool {
        r.pos.iter().any(|&b| self.val[b as usize] == FALSE)
            || r.neg.iter().any(|&b| self.val[b as usize] == TRUE)
    }

    fn body_satisfied(&self, r: &IRule) -> bool {
        r.pos.iter().all(|&b| self.val[b as usize] == TRUE)
            && r.neg.iter().all(|&b| self.val[b as usize] == FALSE)
    }

    /// A rule can still justify `a`: body not falsified and no other
    /// head atom already true. Stable models only contain atoms with
    /// such a rule, so losing the last one forces falsity.
    fn has_potential_support(&self, a: u32) -> bool {
        self.head_occ[a as usize].iter().any(|&ri| {
            let r = &self.rules[ri as usize];
            !self.body_falsified(r)
                && !r
                    .head
                    .iter()
                    .any(|&h| h != a && self.val[h as usize] == TRUE)
        })
    }

    /// Returns false on conflict.
    fn assign(&mut self, a: u32, v: i8, queue: &mut VecDeque<u32>) -> bool {
        match self.val[a as usize] {
            UNKNOWN => {
                self.val[a as usize] = v;
                self.trail.push(a);
                queue.push_back(a);
                true
            }
            cur => cur == v,
        }
    }

    /// Exhausts unit and support consequences of the queued assignments.
    /// Returns false on conflict.
    fn propagate(&mut self, queue: &mut VecDeque<u32>) -> bool {
        while let Some(a) = queue.pop_front() {
            let mut dirty_rules: Vec<u32> = Vec::new();
            dirty_rules.extend(&self.head_occ[a as usize]);
            dirty_rules.extend(&self.pos_occ[a as usize]);
            dirty_rules.extend(&self.neg_occ[a as usize]);

            let mut support_dirty: BTreeSet<u32> = BTreeSet::new();
            for &ri in &dirty_rules {
                support_dirty.extend(self.rules[ri as usize].head.iter().copied());
            }

            for ri in dirty_rules {
                if !self.check_rule(ri, queue) {
                    return false;
                }
            }
            for b in support_dirty {
                if self.val[b as usize] == FALSE {
                    continue;
                }
                if !self.has_potential_support(b) {
                    if self.val[b as usize] == TRUE {
                        return false;
                    }
                    if !self.assign(b, FALSE, queue) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn check_rule(&mut self, ri: u32, queue: &mut VecDeque<u32>) -> bool {
        let r = &self.rules[ri as usize];
        if r.head.iter().any(|&h| self.val[h as usize] == TRUE) {
            return true;
        }
        let unknown_heads: Vec<u32> = r
            .head
            .iter()
            .copied()
            .filter(|&h| self.val[h as usize] == UNKNOWN)
            .collect();

        if self.body_satisfied(r) {
            return match unknown_heads.as_slice() {
                [] => false,
                [h] => self.assign(*h, TRUE, queue),
                _ => true,
            };
        }
        if self.body_falsified(r) || !unknown_heads.is_empty() {
            return true;
        }

        // Head is entirely false: the body must stay unsatisfied. With a
        // single undetermined element left, falsify it.
        let mut pending: Option<(u32, i8)> = None;
        let mut open = 0usize;
        for &b in &r.pos {
            if self.val[b as usize] == UNKNOWN {
                open += 1;
                pending = Some((b, FALSE));
            }
        }
        for &b in &r.neg {
            if self.val[b as usize] == UNKNOWN {
                open += 1;
                pending = Some((b, TRUE));
            }
        }
        match (open, pending) {
            (1, Some((b, v))) => self.assign(b, v, queue),
            _ => true,
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let a = self.trail.pop().unwrap();
            self.val[a as usize] = UNKNOWN;
        }
    }

    fn dfs(&mut self, out: &mut Vec<Vec<u32>>) {
        match self.val.iter().position(|&v| v == UNKNOWN) {
            None => {
                if let Some(model) = self.leaf_check() {
                    out.push(model);
                }
            }
            Some(a) => {
                for v in [TRUE, FALSE] {
                    let mark = self.trail.len();
                    let mut queue = VecDeque::new();
                    if self.assign(a as u32, v, &mut queue) && self.propagate(&mut queue) {
                        self.dfs(out);
                    }
                    self.undo(mark);
                }
            }
        }
    }

    /// Total assignment: accept it only if it models the program and is
    /// a minimal model of the reduct.
    fn leaf_check(&self) -> Option<Vec<u32>> {
        for r in self.rules {
            if self.body_satisfied(r) && !r.head.iter().any(|&h| self.val[h as usize] == TRUE) {
                return None;
            }
        }
        let reduct: Vec<(Vec<u32>, Vec<u32>)> = self
            .rules
            .iter()
            .filter(|r| !r.neg.iter().any(|&b| self.val[b as usize] == TRUE))
            .map(|r| (r.head.clone(), r.pos.clone()))
            .collect();
        let in_s: Vec<bool> = self.val.iter().map(|&v| v == TRUE).collect();
        if has_smaller_model(&reduct, &in_s) {
            return None;
        }
        Some(
            (0..self.val.len() as u32)
                .filter(|&a| in_s[a as usize])
                .collect(),
        )
    }
}

/// Does any proper subset of `s` model the positive program? Rules are
/// restricted to `s`: heads lose false atoms, rules with a positive body
/// atom outside `s` can never fire for a subset and are dropped.
fn has_smaller_model(reduct: &[(Vec<u32>, Vec<u32>)], in_s: &[bool]) -> bool {
    let restricted: Vec<(Vec<u32>, Vec<u32>)> = reduct
        .iter()
        .filter(|(_, pos)| pos.iter().all(|&b| in_s[b as usize]))
        .map(|(head, pos)| {
            (
                head.iter().copied().filter(|&h| in_s[h as usize]).collect(),
                pos.clone(),
            )
        })
        .collect();
    let mut val: Vec<i8> = in_s
        .iter()
        .map(|&inside| if inside { UNKNOWN } else { FALSE })
        .collect();
    search_smaller(&restricted, in_s, &mut val)
}

fn search_smaller(rules: &[(Vec<u32>, Vec<u32>)], in_s: &[bool], val: &mut Vec<i8>) -> bool {
    // Unit propagation; conflicts mean no model extends this assignment.
    let mut trail: Vec<u32> = Vec::new();
    loop {
        let mut changed = false;
        for (head, pos) in rules {
            if head.iter().any(|&h| val[h as usize] == TRUE) {
                continue;
            }
            if pos.iter().any(|&b| val[b as usize] == FALSE) {
                continue;
            }
            let body_true = pos.iter().all(|&b| val[b as usize] == TRUE);
            let unknown_heads: Vec<u32> = head
                .iter()
                .copied()
                .filter(|&h| val[h as usize] == UNKNOWN)
                .collect();
            if body_true {
                match unknown_heads.as_slice() {
                    [] => {
                        undo_all(val, &trail);
                        return false;
                    }
                    [h] => {
                        val[*h as usize] = TRUE;
                        trail.push(*h);
                        changed = true;
                    }
                    _ => {}
                }
            } else if unknown_heads.is_empty() {
                let open: Vec<u32> = pos
                    .iter()
                    .copied()
                    .filter(|&b| val[b as usize] == UNKNOWN)
                    .collect();
                if let [b] = open.as_slice() {
                    val[*b as usize] = FALSE;
                    trail.push(*b);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let result = match val.iter().position(|&v| v == UNKNOWN) {
        Some(a) => [FALSE, TRUE].iter().any(|&v| {
            val[a] = v;
            let found = search_smaller(rules, in_s, val);
            val[a] = UNKNOWN;
            found
        }),
        None => {
            // Proper subset: some atom of the candidate itself must be
            // dropped; atoms outside it are false in both sets.
            (0..val.len()).any(|a| in_s[a] && val[a] == FALSE)
                && rules.iter().all(|(head, pos)| {
                    pos.iter().any(|&b| val[b as usize] == FALSE)
                        || head.iter().any(|&h| val[h as usize] == TRUE)
                })
        }
    };
    undo_all(val, &trail);
    result
}

fn undo_all(val: &mut [i8], trail: &[u32]) {
    for &a in trail {
        val[a as usize] = UNKNOWN;
    }
}

/// Enumerate all stable models, as sets of atoms, in sorted order.
pub(crate) fn stable_models(p: &Program, cap: usize) -> Result<BTreeSet<BTreeSet<Atom>>, AspError> {
    let mut atoms: Vec<Atom> = Vec::new();
    let mut index: HashMap<Atom, u32> = HashMap::new();
    let intern = |a: &Atom, atoms: &mut Vec<Atom>, index: &mut HashMap<Atom, u32>| -> u32 {
        if let Some(&i) = index.get(a) {
            return i;
        }
        let i = atoms.len() as u32;
        atoms.push(a.clone());
        index.insert(a.clone(), i);
        i
    };

    let mut rules: Vec<IRule> = Vec::new();
    for r in p.rules() {
        let head: Vec<u32> = r
            .head()
            .iter()
            .map(|l| {
                debug_assert!(
                    !l.strong_neg,
                    "engine input must be classical-negation free"
                );
                intern(&l.atom, &mut atoms, &mut index)
            })
            .collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for e in r.body() {
            match e {
                BodyElement::Objective { literal, neg_depth } => {
                    debug_assert!(!literal.strong_neg && *neg_depth <= 1);
                    let i = intern(&literal.atom, &mut atoms, &mut index);
                    if *neg_depth == 0 {
                        pos.push(i);
                    } else {
                        neg.push(i);
                    }
                }
                BodyElement::Subjective { .. } => unreachable!("engine input must be plain ASP"),
            }
        }
        pos.sort_unstable();
        pos.dedup();
        neg.sort_unstable();
        neg.dedup();
        rules.push(IRule { head, pos, neg });
    }

    let head_atoms: BTreeSet<u32> = rules.iter().flat_map(|r| r.head.iter().copied()).collect();
    if head_atoms.len() > cap {
        return Err(AspError::CapacityExceeded {
            atoms: head_atoms.len(),
            cap,
        });
    }

    let n = atoms.len();
    let mut head_occ = vec![Vec::new(); n];
    let mut pos_occ = vec![Vec::new(); n];
    let mut neg_occ = vec![Vec::new(); n];
    for (ri, r) in rules.iter().enumerate() {
        for &a in &r.head {
            head_occ[a as usize].push(ri as u32);
        }
        for &a in &r.pos {
            pos_occ[a as usize].push(ri as u32);
        }
        for &a in &r.neg {
            neg_occ[a as usize].push(ri as u32);
        }
    }

    let mut search = Search {
        rules: &rules,
        val: vec![UNKNOWN; n],
        trail: Vec::new(),
        head_occ,
        pos_occ,
        neg_occ,
    };

    // Root propagation: establish supports and unit consequences before
    // any branching; a root conflict means no stable models at all.
    let mut ok = true;
    let mut queue = VecDeque::new();
    for a in 0..n as u32 {
        if search.val[a as usize] == UNKNOWN
            && !search.has_potential_support(a)
            && !search.assign(a, FALSE, &mut queue)
        {
            ok = false;
            break;
        }
    }
    let mut models = Vec::new();
    if ok {
        for ri in 0..rules.len() as u32 {
            if !search.check_rule(ri, &mut queue) {
                ok = false;
                break;
            }
        }
    }
    if ok && search.propagate(&mut queue) {
        search.dfs(&mut models);
    }

    Ok(models
        .into_iter()
        .map(|m| m.into_iter().map(|a| atoms[a as usize].clone()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_asp;

    fn run(text: &str) -> Vec<Vec<String>> {
        let p = parse_asp(text).unwrap();
        let (p2, fresh) = super::super::remove_nested_negation(&p);
        stable_models(&p2, 22)
            .unwrap()
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .filter(|a| !fresh.contains(a))
                    .map(|a| a.to_string())
                    .collect()
            })
            .collect()
    }

    /// Reference semantics by brute force over the full universe, with
    /// minimality checked over every proper subset. Doubled negation is
    /// interpreted directly: `not not l` holds iff `l` is in the set.
    fn oracle(text: &str) -> Vec<Vec<String>> {
        let p = parse_asp(text).unwrap();
        let atoms: Vec<Atom> = {
            let mut v: Vec<Atom> = p.universe().into_iter().map(|l| l.atom).collect();
            v.sort();
            v.dedup();
            v
        };
        assert!(atoms.len() <= 16);
        let n = atoms.len();
        let contains = |mask: u64, i: usize| mask >> i & 1 == 1;
        let idx = |a: &Atom| atoms.iter().position(|x| x == a).unwrap();

        // Reduct of p relative to mask: keep a rule when all its negated
        // elements agree with the candidate; positive parts remain.
        let reduct = |mask: u64| -> Vec<(Vec<usize>, Vec<usize>)> {
            let mut out = Vec::new();
            'rules: for r in p.rules() {
                let mut pos = Vec::new();
                for e in r.body() {
                    match e {
                        BodyElement::Objective {
                            literal,
                            neg_depth: 0,
                        } => {
                            pos.push(idx(&literal.atom));
                        }
                        BodyElement::Objective {
                            literal,
                            neg_depth: 1,
                        } => {
                            if contains(mask, idx(&literal.atom)) {
                                continue 'rules;
                            }
                        }
                        BodyElement::Objective {
                            literal,
                            neg_depth: 2,
                        } => {
                            if !contains(mask, idx(&literal.atom)) {
                                continue 'rules;
                            }
                        }
                        _ => unreachable!(),
                    }
                }
                out.push((r.head().iter().map(|l| idx(&l.atom)).collect(), pos));
            }
            out
        };
        let models_positive = |rules: &[(Vec<usize>, Vec<usize>)], mask: u64| -> bool {
            rules.iter().all(|(head, pos)| {
                !pos.iter().all(|&b| contains(mask, b)) || head.iter().any(|&h| contains(mask, h))
            })
        };

        let mut stable = Vec::new();
        for mask in 0..1u64 << n {
            let rules = reduct(mask);
            if !models_positive(&rules, mask) {
                continue;
            }
            let mut minimal = true;
            let mut sub = mask;
            loop {
                sub = sub.wrapping_sub(1) & mask;
                if sub == mask {
                    break;
                }
                if models_positive(&rules, sub) {
                    minimal = false;
                    break;
                }
                if sub == 0 {
                    break;
                }
            }
            if minimal {
                stable.push(mask);
            }
        }
        let mut out: Vec<Vec<String>> = stable
            .into_iter()
            .map(|mask| {
                (0..n)
                    .filter(|&i| contains(mask, i))
                    .map(|i| atoms[i].to_string())
                    .collect()
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn matches_direct_definition_on_named_programs() {
        let programs = [
            "a | b.",
            "a :- not a.",
            "a :- not not a.",
            "a :- b. b :- a.",
            "a | b. a :- b.",
            "a | b | c. :- a. x :- not b.",
            "a :- not b. b :- not a. c :- a. c :- b.",
            "p | q. r :- p, not q. :- r.",
            "a. b :- a, not c. c :- not b.",
            "x :- not not y. y :- not not x.",
        ];
        for text in programs {
            let mut got = run(text);
            got.sort();
            assert_eq!(got, oracle(text), "program: {text}");
        }
    }

    #[test]
    fn matches_direct_definition_on_all_rule_pairs() {
        // Every two-rule program built from a small pool of rule shapes
        // over atoms a, b.
        let pool = [
            "a.",
            "a | b.",
            ":- a.",
            ":- not b.",
            "a :- b.",
            "a :- not b.",
            "b :- not a.",
            "a :- not not a.",
            "b :- not not a.",
            "a :- b, not a.",
        ];
        for r1 in pool {
            for r2 in pool {
                let text = format!("{r1}\n{r2}");
                let mut got = run(&text);
                got.sort();
                assert_eq!(got, oracle(&text), "program: {text}");
            }
        }
    }
}
