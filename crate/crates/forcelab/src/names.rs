//! Ramified P-names and their interpretation under a filter.
//!
//! A name is a finite set of (sub-name, condition) pairs, canonically ordered
//! and deduplicated, so structural equality is decidable and stable. The
//! condition component is an index into the ambient [`Quasiorder`].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::hf::HfSet;
use crate::order::{Filter, Quasiorder};

/// A ramified P-name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PName {
    entries: Vec<(PName, usize)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NameError {
    /// A condition index hereditarily mentioned in the name is not an element
    /// of the quasi-order. The path lists entry positions from the root.
    #[error("unknown condition index {index} at entry path {path:?}")]
    UnknownCondition { index: usize, path: Vec<usize> },
}

impl PName {
    /// The name of the empty set.
    pub fn empty() -> Self {
        PName { entries: Vec::new() }
    }

    /// Builds the canonical name with the given entries.
    pub fn new(mut entries: Vec<(PName, usize)>) -> Self {
        entries.sort();
        entries.dedup();
        PName { entries }
    }

    pub fn entries(&self) -> &[(PName, usize)] {
        &self.entries
    }

    /// Name rank: 0 for the empty name, else 1 + max child rank.
    pub fn rank(&self) -> u32 {
        self.entries
            .iter()
            .map(|(c, _)| c.rank() + 1)
            .max()
            .unwrap_or(0)
    }

    /// The set `pe t` of all names occurring hereditarily in the entries,
    /// deduplicated, ordered by (rank, canonical order).
    pub fn potential_elements(&self) -> Vec<PName> {
        let mut acc = BTreeSet::new();
        fn walk(t: &PName, acc: &mut BTreeSet<PName>) {
            for (child, _) in t.entries() {
                if acc.insert(child.clone()) {
                    walk(child, acc);
                }
            }
        }
        walk(self, &mut acc);
        let mut out: Vec<PName> = acc.into_iter().collect();
        out.sort_by(|a, b| (a.rank(), a).cmp(&(b.rank(), b)));
        out
    }

    /// The G-interpretation: `s[G] = { child[G] : (child, p) in entries, p in G }`.
    pub fn interpret(&self, g: &Filter) -> HfSet {
        HfSet::from_children(
            self.entries
                .iter()
                .filter(|(_, p)| g.contains(*p))
                .map(|(child, _)| child.interpret(g))
                .collect(),
        )
    }

    /// Checks that every condition hereditarily mentioned exists in `order`.
    pub fn validate(&self, order: &Quasiorder) -> Result<(), NameError> {
        fn walk(t: &PName, order: &Quasiorder, path: &mut Vec<usize>) -> Result<(), NameError> {
            for (i, (child, cond)) in t.entries().iter().enumerate() {
                if *cond >= order.len() {
                    let mut p = path.clone();
                    p.push(i);
                    return Err(NameError::UnknownCondition { index: *cond, path: p });
                }
                path.push(i);
                walk(child, order, path)?;
                path.pop();
            }
            Ok(())
        }
        walk(self, order, &mut Vec::new())
    }

    /// All condition indices hereditarily mentioned.
    pub fn mentioned_conditions(&self) -> BTreeSet<usize> {
        let mut acc = BTreeSet::new();
        fn walk(t: &PName, acc: &mut BTreeSet<usize>) {
            for (child, cond) in t.entries() {
                acc.insert(*cond);
                walk(child, acc);
            }
        }
        walk(self, &mut acc);
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{cohen2, cohen2_names};

    #[test]
    fn potential_elements_examples() {
        let (_q, zero, s0, t) = cohen2_fixture();
        assert!(PName::empty().potential_elements().is_empty());
        assert_eq!(t.potential_elements(), vec![zero.clone(), s0.clone()]);
        assert_eq!(s0.potential_elements(), vec![zero]);
    }

    fn cohen2_fixture() -> (Quasiorder, PName, PName, PName) {
        let q = cohen2();
        let (zero, s0, t) = cohen2_names(&q);
        (q, zero, s0, t)
    }

    #[test]
    fn name_ranks() {
        let (_q, zero, s0, t) = cohen2_fixture();
        assert_eq!(zero.rank(), 0);
        assert_eq!(s0.rank(), 1);
        assert_eq!(t.rank(), 2);
    }

    #[test]
    fn interpret_examples() {
        let (q, zero, s0, t) = cohen2_fixture();
        let gens = q.generic_filters();
        let up = |leaf: &str| {
            *gens
                .iter()
                .find(|g| g.contains(q.index_of(leaf).unwrap()))
                .unwrap()
        };
        let hf = |s: &str| crate::hf::parse_hf(s).unwrap();
        for g in &gens {
            assert_eq!(zero.interpret(g), hf("{}"));
        }
        assert_eq!(s0.interpret(&up("aa")), hf("{{}}"));
        assert_eq!(s0.interpret(&up("ba")), hf("{}"));
        assert_eq!(t.interpret(&up("aa")), hf("{{},{{}}}"));
        assert_eq!(t.interpret(&up("ba")), hf("{{}}"));
    }

    #[test]
    fn validate_examples() {
        let (q, _zero, _s0, t) = cohen2_fixture();
        assert!(t.validate(&q).is_ok());
        assert!(PName::empty().validate(&q).is_ok());
        let bad = PName::new(vec![(PName::empty(), 99)]);
        assert_eq!(
            bad.validate(&q).unwrap_err(),
            NameError::UnknownCondition { index: 99, path: vec![0] }
        );
    }

    #[test]
    fn pe_is_hereditarily_closed() {
        let (_q, _zero, _s0, t) = cohen2_fixture();
        let pe = t.potential_elements();
        for s in &pe {
            for r in s.potential_elements() {
                assert!(pe.contains(&r));
            }
        }
    }

    #[test]
    fn interpret_monotone_in_filter() {
        // G subset of G' implies s[G] subset of s[G'] elementwise; on cohen2
        // the generics are incomparable, so check against sub-filters instead.
        let (q, _zero, s0, t) = cohen2_fixture();
        let e = q.index_of("e").unwrap();
        let small = Filter::new(&q, 1 << e).unwrap();
        for g in q.generic_filters() {
            assert!(small.is_subset(&g));
            for name in [&s0, &t] {
                let lo = name.interpret(&small);
                let hi = name.interpret(&g);
                for c in lo.children() {
                    assert!(hi.contains(c));
                }
            }
        }
    }
}
