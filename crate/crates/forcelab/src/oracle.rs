//! Brute-force ground truth, independent of the Sigma engine: enumerate all
//! generics, compute all interpretations of t, and check the engine's
//! answers against them. The only engine internals reused here are name
//! interpretation and generic-filter enumeration.

use std::collections::BTreeSet;

use crate::forcing::ForcingContext;
use crate::hf::HfSet;
use crate::names::PName;
use crate::order::{CondMask, Filter, Quasiorder};
use crate::sigma::{Caps, SigmaError, SigmaInstance, StepVariant, Supercondition};

/// Every generic filter with its interpretation of t, plus the deduplicated
/// value set {t[G] : G generic}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericCatalog {
    pub entries: Vec<(Filter, HfSet)>,
    pub values: Vec<HfSet>,
}

/// Report of the G-compatibility check: which superconditions should have
/// been in the fixpoint but were not.
#[derive(Clone, Debug)]
pub struct SgGReport {
    pub ok: bool,
    pub violations: Vec<(Filter, Supercondition)>,
}

pub fn generic_sets(order: &Quasiorder, t: &PName) -> Result<GenericCatalog, SigmaError> {
    let fc = ForcingContext::new(order);
    if !fc.forces_transitive(t) {
        return Err(SigmaError::NotForcedTransitive);
    }
    let entries: Vec<(Filter, HfSet)> = order
        .generic_filters()
        .into_iter()
        .map(|g| {
            let v = t.interpret(&g);
            (g, v)
        })
        .collect();
    let mut values: Vec<HfSet> = entries.iter().map(|(_, v)| v.clone()).collect();
    values.sort();
    values.dedup();
    Ok(GenericCatalog { entries, values })
}

/// Fixpoint-nonempty iff X is a generic value: the two sides of the
/// equivalence computed independently and compared.
pub fn check_sf(
    order: &Quasiorder,
    t: &PName,
    x: &HfSet,
    variant: StepVariant,
    caps: Caps,
) -> Result<bool, SigmaError> {
    let catalog = generic_sets(order, t)?;
    let inst = SigmaInstance::new(order, t, x, caps)?;
    let nonempty = !inst.sigma_fixpoint(variant).fixpoint.is_empty();
    Ok(catalog.values.contains(x) == nonempty)
}

/// For every generic G with X := t[G], every p in G, and every G-compatible
/// assignment a with <p,a> a supercondition of (X,t): <p,a> must be in the
/// fixpoint. Violations are collected rather than asserted.
pub fn check_sgg(
    order: &Quasiorder,
    t: &PName,
    variant: StepVariant,
    caps: Caps,
) -> Result<SgGReport, SigmaError> {
    check_sgg_against(order, t, caps, &|inst: &SigmaInstance| {
        inst.sigma_fixpoint(variant).fixpoint
    })
}

/// G-compatibility check against a caller-supplied fixpoint computation
/// (used to confirm the check actually detects broken engines).
pub(crate) fn check_sgg_against(
    order: &Quasiorder,
    t: &PName,
    caps: Caps,
    fixpoint_of: &dyn Fn(&SigmaInstance) -> BTreeSet<Supercondition>,
) -> Result<SgGReport, SigmaError> {
    let fc = ForcingContext::new(order);
    if !fc.forces_transitive(t) {
        return Err(SigmaError::NotForcedTransitive);
    }
    let pe = t.potential_elements();
    let mut violations = Vec::new();
    for g in order.generic_filters() {
        let x = t.interpret(&g);
        let inst = SigmaInstance::new(order, t, &x, caps)?;
        let fixpoint = fixpoint_of(&inst);
        let space = inst.superconditions();
        // the G-compatible assignment on a domain d is s |-> s[G]
        for dom_mask in 0u32..(1 << pe.len()) {
            let assign: std::collections::BTreeMap<PName, HfSet> = pe
                .iter()
                .enumerate()
                .filter(|(i, _)| dom_mask & (1 << i) != 0)
                .map(|(_, s)| (s.clone(), s.interpret(&g)))
                .collect();
            for p in g.indices() {
                let cand = Supercondition { cond: p, assign: assign.clone() };
                if space.contains(&cand) && !fixpoint.contains(&cand) {
                    violations.push((g, cand));
                }
            }
        }
    }
    Ok(SgGReport { ok: violations.is_empty(), violations })
}

// ---- brute-force reference procedures ----

/// Meets-every-dense-set by explicit enumeration of all dense subsets.
/// Exponential; reference for the cone criterion on tiny orders.
pub fn meets_every_dense_brute(order: &Quasiorder, e: CondMask) -> bool {
    (0..=order.full_mask())
        .filter(|&d| order.is_dense_mask(d))
        .all(|d| d & e != 0)
}

/// All generic filters by brute force: every subset that is a filter and
/// meets every dense subset, dense sets enumerated explicitly.
pub fn generic_filters_brute(order: &Quasiorder) -> Vec<Filter> {
    let mut out = Vec::new();
    for mask in 1..=order.full_mask() {
        if order.is_filter_mask(mask) && meets_every_dense_brute(order, mask) {
            out.push(Filter::from_mask_unchecked(mask));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hf::parse_hf;
    use crate::testutil::{cohen2, cohen2_names};

    #[test]
    fn generic_sets_examples() {
        let q = cohen2();
        let (zero, _s0, t) = cohen2_names(&q);
        let cat = generic_sets(&q, &PName::empty()).unwrap();
        assert_eq!(cat.values, vec![HfSet::empty()]);
        let cat = generic_sets(&q, &t).unwrap();
        assert_eq!(cat.entries.len(), 4);
        assert_eq!(
            cat.values,
            vec![parse_hf("{{}}").unwrap(), parse_hf("{{},{{}}}").unwrap()]
        );
        let q1 = Quasiorder::build(&["e"], &[]).unwrap();
        let t1 = PName::new(vec![(zero, 0)]);
        let cat = generic_sets(&q1, &t1).unwrap();
        assert_eq!(cat.values, vec![parse_hf("{{}}").unwrap()]);
    }

    #[test]
    fn check_sf_examples() {
        let q = cohen2();
        let (zero, _s0, t) = cohen2_names(&q);
        let caps = Caps::default();
        let one = parse_hf("{{}}").unwrap();
        assert!(check_sf(&q, &t, &one, StepVariant::Separated, caps).unwrap());
        let three = parse_hf("{{},{{}},{{},{{}}}}").unwrap();
        assert!(check_sf(&q, &t, &three, StepVariant::Separated, caps).unwrap());
        // documented degenerate divergence
        let e = q.index_of("e").unwrap();
        let t1 = PName::new(vec![(zero, e)]);
        let empty = HfSet::empty();
        assert!(check_sf(&q, &t1, &empty, StepVariant::Separated, caps).unwrap());
        assert!(!check_sf(&q, &t1, &empty, StepVariant::Coupled, caps).unwrap());
    }

    #[test]
    fn check_sgg_examples() {
        let q = cohen2();
        let (_zero, _s0, t) = cohen2_names(&q);
        let caps = Caps::default();
        assert!(check_sgg(&q, &PName::empty(), StepVariant::Separated, caps)
            .unwrap()
            .ok);
        for v in [StepVariant::Separated, StepVariant::Coupled] {
            assert!(check_sgg(&q, &t, v, caps).unwrap().ok);
        }
    }

    #[test]
    fn check_sgg_detects_mutated_engine() {
        // a doctored fixpoint that drops one known-good member must fail
        let q = cohen2();
        let (zero, s0, t) = cohen2_names(&q);
        let caps = Caps::default();
        let good = Supercondition {
            cond: q.index_of("aa").unwrap(),
            assign: [
                (zero, parse_hf("{}").unwrap()),
                (s0, parse_hf("{{}}").unwrap()),
            ]
            .into_iter()
            .collect(),
        };
        let report = check_sgg_against(&q, &t, caps, &|inst| {
            let mut fix = inst.sigma_fixpoint(StepVariant::Separated).fixpoint;
            fix.remove(&good);
            fix
        })
        .unwrap();
        assert!(!report.ok);
        assert!(report.violations.iter().any(|(_, sc)| sc == &good));
    }

    #[test]
    fn brute_force_generics_match() {
        for q in [
            cohen2(),
            Quasiorder::build(&["e"], &[]).unwrap(),
            Quasiorder::build(
                &["e", "p", "q"],
                &[("p", "e"), ("q", "e"), ("p", "q"), ("q", "p")],
            )
            .unwrap(),
        ] {
            assert_eq!(q.generic_filters(), generic_filters_brute(&q));
        }
    }
}
