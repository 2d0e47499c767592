//! Finite forcing notions: quasi-orders, dense subsets, filters, and exact
//! enumeration of generic filters.
//!
//! `p <= q` means p is stronger (carries more information). Subsets of the
//! order are represented as bitmasks over condition indices throughout.

use std::collections::HashMap;

use thiserror::Error;

/// A bitmask over condition indices; bit `i` stands for the i-th element.
pub type CondMask = u32;

/// Hard representation limit (the default cap is 16).
pub const MAX_CONDITIONS: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("duplicate element id `{0}`")]
    DuplicateElement(String),
    #[error("unknown element id `{0}`")]
    UnknownElement(String),
    #[error("too many elements: {0} (limit {MAX_CONDITIONS})")]
    TooManyElements(usize),
    #[error("a quasi-order needs at least one element")]
    Empty,
}

/// A finite forcing notion: elements with a reflexive-transitive `<=`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quasiorder {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    /// `leq[p]` has bit q set iff p <= q.
    leq: Vec<CondMask>,
    /// `cones[p]` = {q : q <= p}.
    cones: Vec<CondMask>,
}

impl Quasiorder {
    /// Builds the order from declared elements and generator pairs `p <= q`;
    /// the relation stored is the reflexive-transitive closure.
    pub fn build<S: AsRef<str>>(
        elements: &[S],
        generators: &[(S, S)],
    ) -> Result<Self, OrderError> {
        if elements.is_empty() {
            return Err(OrderError::Empty);
        }
        if elements.len() > MAX_CONDITIONS {
            return Err(OrderError::TooManyElements(elements.len()));
        }
        let mut ids = Vec::with_capacity(elements.len());
        let mut index = HashMap::new();
        for e in elements {
            let id = e.as_ref().to_string();
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(OrderError::DuplicateElement(id));
            }
            ids.push(id);
        }
        let n = ids.len();
        let mut leq: Vec<CondMask> = (0..n).map(|p| 1 << p).collect();
        for (p, q) in generators {
            let pi = *index
                .get(p.as_ref())
                .ok_or_else(|| OrderError::UnknownElement(p.as_ref().to_string()))?;
            let qi = *index
                .get(q.as_ref())
                .ok_or_else(|| OrderError::UnknownElement(q.as_ref().to_string()))?;
            leq[pi] |= 1 << qi;
        }
        // Warshall closure: p <= q and q <= r gives p <= r.
        loop {
            let mut changed = false;
            for p in 0..n {
                let mut acc = leq[p];
                let mut qs = leq[p];
                while qs != 0 {
                    let q = qs.trailing_zeros() as usize;
                    qs &= qs - 1;
                    acc |= leq[q];
                }
                if acc != leq[p] {
                    leq[p] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let cones = (0..n)
            .map(|p| {
                let mut m = 0;
                for q in 0..n {
                    if leq[q] & (1 << p) != 0 {
                        m |= 1 << q;
                    }
                }
                m
            })
            .collect();
        Ok(Quasiorder { ids, index, leq, cones })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty orders
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, p: usize) -> &str {
        &self.ids[p]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.leq[p] & (1 << q) != 0
    }

    /// The full cone below p: {q : q <= p}.
    pub fn cone(&self, p: usize) -> CondMask {
        self.cones[p]
    }

    pub fn full_mask(&self) -> CondMask {
        if self.ids.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.ids.len()) - 1
        }
    }

    /// True iff every condition has a member of `d` at or below it.
    pub fn is_dense_mask(&self, d: CondMask) -> bool {
        (0..self.len()).all(|p| self.cones[p] & d != 0)
    }

    pub fn is_dense(&self, d: &[usize]) -> bool {
        self.is_dense_mask(indices_to_mask(d))
    }

    /// Cone criterion: a set meets every dense subset iff it contains a full
    /// cone {q : q <= p0} for some p0. (If no cone fits inside `e`, the
    /// complement of `e` is itself dense and misses `e`.)
    pub fn meets_every_dense_mask(&self, e: CondMask) -> bool {
        (0..self.len()).any(|p| self.cones[p] & !e == 0)
    }

    /// Upward closure {q : exists p in mask, p <= q}.
    pub fn upward_closure(&self, mask: CondMask) -> CondMask {
        let mut acc = 0;
        let mut ps = mask;
        while ps != 0 {
            let p = ps.trailing_zeros() as usize;
            ps &= ps - 1;
            acc |= self.leq[p];
        }
        acc
    }

    /// Classes of <=-minimal elements, grouped by mutual <=, ordered by the
    /// smallest member index.
    pub fn minimal_classes(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let minimal: Vec<bool> = (0..n)
            .map(|p| {
                let mut rs = self.cones[p];
                let mut ok = true;
                while rs != 0 {
                    let r = rs.trailing_zeros() as usize;
                    rs &= rs - 1;
                    if !self.leq(p, r) {
                        ok = false;
                        break;
                    }
                }
                ok
            })
            .collect();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for p in 0..n {
            if !minimal[p] || seen[p] {
                continue;
            }
            let mut class = Vec::new();
            for r in 0..n {
                if minimal[r] && self.leq(p, r) && self.leq(r, p) {
                    seen[r] = true;
                    class.push(r);
                }
            }
            classes.push(class);
        }
        classes
    }

    /// All generic filters: the filters meeting every dense subset. These are
    /// exactly the upward closures of the minimal classes.
    pub fn generic_filters(&self) -> Vec<Filter> {
        let mut out: Vec<Filter> = self
            .minimal_classes()
            .into_iter()
            .map(|class| Filter {
                mask: self.upward_closure(indices_to_mask(&class)),
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Whether `mask` is upward closed and directed (a filter).
    pub fn is_filter_mask(&self, mask: CondMask) -> bool {
        if mask == 0 {
            return false;
        }
        if self.upward_closure(mask) != mask {
            return false;
        }
        let members: Vec<usize> = mask_to_indices(mask);
        members.iter().all(|&p| {
            members
                .iter()
                .all(|&q| mask_to_indices(mask).iter().any(|&r| self.leq(r, p) && self.leq(r, q)))
        })
    }
}

/// An upward-closed, directed subset of a quasi-order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Filter {
    mask: CondMask,
}

impl Filter {
    /// Wraps a mask after checking the filter laws.
    pub fn new(order: &Quasiorder, mask: CondMask) -> Result<Self, OrderError> {
        if !order.is_filter_mask(mask) {
            return Err(OrderError::UnknownElement("not a filter".to_string()));
        }
        Ok(Filter { mask })
    }

    pub(crate) fn from_mask_unchecked(mask: CondMask) -> Self {
        Filter { mask }
    }

    pub fn mask(&self) -> CondMask {
        self.mask
    }

    pub fn contains(&self, p: usize) -> bool {
        self.mask & (1 << p) != 0
    }

    pub fn indices(&self) -> Vec<usize> {
        mask_to_indices(self.mask)
    }

    pub fn is_subset(&self, other: &Filter) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn render(&self, order: &Quasiorder) -> String {
        let ids: Vec<&str> = self.indices().iter().map(|&p| order.id(p)).collect();
        format!("{{{}}}", ids.join(","))
    }
}

pub fn indices_to_mask(indices: &[usize]) -> CondMask {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn mask_to_indices(mask: CondMask) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::cohen2;

    #[test]
    fn one_point_order() {
        let q = Quasiorder::build(&["e"], &[]).unwrap();
        assert_eq!(q.len(), 1);
        assert!(q.leq(0, 0));
        assert_eq!(q.minimal_classes(), vec![vec![0]]);
        let gens = q.generic_filters();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].indices(), vec![0]);
    }

    #[test]
    fn cohen2_shape() {
        let q = cohen2();
        assert_eq!(q.len(), 7);
        let a = q.index_of("a").unwrap();
        let aa = q.index_of("aa").unwrap();
        let e = q.index_of("e").unwrap();
        let b = q.index_of("b").unwrap();
        assert!(q.leq(aa, a) && q.leq(aa, e) && q.leq(a, e));
        assert!(!q.leq(aa, b) && !q.leq(a, b) && !q.leq(e, a));
        // leaves are the minimal classes
        let classes = q.minimal_classes();
        assert_eq!(classes.len(), 4);
        for c in &classes {
            assert_eq!(c.len(), 1);
        }
    }

    #[test]
    fn quasi_order_cycle_makes_equivalents() {
        let q = Quasiorder::build(&["p", "q"], &[("p", "q"), ("q", "p")]).unwrap();
        assert!(q.leq(0, 1) && q.leq(1, 0));
        assert_eq!(q.minimal_classes(), vec![vec![0, 1]]);
        assert_eq!(q.generic_filters().len(), 1);
    }

    #[test]
    fn density_examples() {
        let q = cohen2();
        let all: Vec<usize> = (0..q.len()).collect();
        assert!(q.is_dense(&all));
        let leaves: Vec<usize> = ["aa", "ab", "ba", "bb"]
            .iter()
            .map(|s| q.index_of(s).unwrap())
            .collect();
        assert!(q.is_dense(&leaves));
        assert!(!q.is_dense(&[q.index_of("a").unwrap()]));
    }

    #[test]
    fn cohen2_generics() {
        let q = cohen2();
        let gens = q.generic_filters();
        assert_eq!(gens.len(), 4);
        let aa = q.index_of("aa").unwrap();
        let a = q.index_of("a").unwrap();
        let e = q.index_of("e").unwrap();
        let up_aa = gens.iter().find(|g| g.contains(aa)).unwrap();
        assert_eq!(up_aa.mask(), indices_to_mask(&[aa, a, e]));
    }

    #[test]
    fn equivalent_bottoms_single_filter() {
        let q = Quasiorder::build(
            &["e", "p", "q"],
            &[("p", "e"), ("q", "e"), ("p", "q"), ("q", "p")],
        )
        .unwrap();
        let gens = q.generic_filters();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].indices().len(), 3);
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            Quasiorder::build(&["a", "a"], &[]).unwrap_err(),
            OrderError::DuplicateElement("a".to_string())
        );
        assert_eq!(
            Quasiorder::build(&["a"], &[("a", "z")]).unwrap_err(),
            OrderError::UnknownElement("z".to_string())
        );
        assert!(Quasiorder::build::<&str>(&[], &[]).is_err());
    }

    #[test]
    fn filters_are_upward_closed_and_directed() {
        let q = cohen2();
        for g in q.generic_filters() {
            assert!(q.is_filter_mask(g.mask()));
        }
    }

    #[test]
    fn cone_criterion_matches_brute_force_small() {
        // exhaustive over all subsets on a couple of shapes
        for q in [
            cohen2(),
            Quasiorder::build(&["e", "p", "q"], &[("p", "e"), ("q", "e")]).unwrap(),
        ] {
            for e in 0..=q.full_mask() {
                let brute = (0..=q.full_mask())
                    .filter(|&d| q.is_dense_mask(d))
                    .all(|d| d & e != 0);
                assert_eq!(q.meets_every_dense_mask(e), brute, "mask {e:b}");
            }
        }
    }
}
