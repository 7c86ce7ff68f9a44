//! Fresh atom name generation for program transformations.

use std::collections::BTreeSet;

use crate::model::ObjectiveLiteral;

/// Name fragment standing for a literal: classical negation becomes a
/// leading "2", so `-q` mangles to `2q`.
pub(crate) fn mangle(l: &ObjectiveLiteral) -> String {
    if l.strong_neg {
        format!("2{}", l.atom.name)
    } else {
        l.atom.name.clone()
    }
}

/// Pick a name starting from `base` that avoids every taken name, and
/// record the result as taken. Collisions take numbered fallbacks, so
/// the choice is deterministic.
pub(crate) fn fresh(base: String, taken: &mut BTreeSet<String>) -> String {
    if taken.insert(base.clone()) {
        return base;
    }
    for k in 2.. {
        let candidate = format!("{base}_{k}");
        if taken.insert(candidate.clone()) {
            return candidate;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Atom;

    #[test]
    fn collisions_fall_back_to_numbered_names() {
        let mut taken: BTreeSet<String> = ["neg_a".to_string()].into_iter().collect();
        assert_eq!(fresh("neg_a".into(), &mut taken), "neg_a_2");
        assert_eq!(fresh("neg_a".into(), &mut taken), "neg_a_3");
        assert_eq!(fresh("neg_b".into(), &mut taken), "neg_b");
    }

    #[test]
    fn mangling_marks_classical_negation() {
        let l = ObjectiveLiteral::negative(Atom::nullary("q"));
        assert_eq!(mangle(&l), "2q");
        assert_eq!(mangle(&l.complement()), "q");
    }
}
