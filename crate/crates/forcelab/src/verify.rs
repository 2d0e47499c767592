//! The full invariant suite for a single (P, t) instance: every structural
//! property the engine is supposed to satisfy, each checked independently
//! and reported as a named pass/fail line.

use crate::forcing::ForcingContext;
use crate::hf;
use crate::names::PName;
use crate::oracle;
use crate::order::Quasiorder;
use crate::sigma::{
    classify_by_bound, lambda_star, Caps, SigmaError, SigmaInstance, StepVariant,
};

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs every structural check on one instance, surveying all transitive sets
/// within the given rank/size bounds.
pub fn verify_instance(
    order: &Quasiorder,
    t: &PName,
    variant: StepVariant,
    max_rank: u32,
    max_size: usize,
    caps: Caps,
) -> Result<VerifyReport, SigmaError> {
    let fc = ForcingContext::new(order);
    if !fc.forces_transitive(t) {
        return Err(SigmaError::NotForcedTransitive);
    }
    let xs = hf::enumerate_transitive_sets(max_rank, max_size)?;
    let catalog = oracle::generic_sets(order, t)?;
    let mut checks = Vec::new();

    // antitone levels and fixpoint extension property, per surveyed X
    let mut antitone = true;
    let mut extension = true;
    let mut equivalence = true;
    let mut builds = true;
    let mut detail_ext = String::new();
    let mut detail_eq = String::new();
    let mut detail_build = String::new();
    for x in &xs {
        let inst = SigmaInstance::new(order, t, x, caps)?;
        let trace = inst.sigma_fixpoint(variant);
        for w in trace.levels.windows(2) {
            if !w[1].is_subset(&w[0]) {
                antitone = false;
            }
        }
        if !inst.is_sigma_stable(&trace.fixpoint, variant) {
            extension = false;
            detail_ext = format!("step moves the fixpoint for X = {x}");
        }
        let generated = !trace.fixpoint.is_empty();
        if generated != catalog.values.contains(x) {
            equivalence = false;
            detail_eq = format!("engine and oracle disagree on X = {x}");
        }
        for start in &trace.fixpoint {
            match inst.build_generic(start, variant) {
                Ok(built) => {
                    if !built.filter.contains(start.cond)
                        || t.interpret(&built.filter) != *x
                    {
                        builds = false;
                        detail_build = format!("bad build from {start:?} for X = {x}");
                    }
                }
                Err(e) => {
                    builds = false;
                    detail_build = format!("build failed for X = {x}: {e}");
                }
            }
        }
    }
    checks.push(CheckResult {
        name: "antitone-levels",
        passed: antitone,
        detail: String::new(),
    });
    checks.push(CheckResult {
        name: "fixpoint-extension-property",
        passed: extension,
        detail: detail_ext,
    });
    checks.push(CheckResult {
        name: "engine-oracle-equivalence",
        passed: equivalence,
        detail: detail_eq,
    });
    checks.push(CheckResult {
        name: "generic-build-from-fixpoint",
        passed: builds,
        detail: detail_build,
    });

    // G-compatible superconditions land in the fixpoint
    let sgg = oracle::check_sgg(order, t, variant, caps)?;
    checks.push(CheckResult {
        name: "g-compatible-membership",
        passed: sgg.ok,
        detail: if sgg.ok {
            String::new()
        } else {
            format!("{} violations", sgg.violations.len())
        },
    });

    // uniform bound is strict and the truncated survey matches full verdicts
    let star = lambda_star(order, t, variant, caps)?;
    let mut strict = true;
    for g in order.generic_filters() {
        let x = t.interpret(&g);
        let inst = SigmaInstance::new(order, t, &x, caps)?;
        if inst.sigma_fixpoint(variant).lambda >= star {
            strict = false;
        }
    }
    checks.push(CheckResult {
        name: "uniform-bound-strict",
        passed: strict,
        detail: format!("lambda* = {star}"),
    });
    let table = classify_by_bound(order, t, max_rank, max_size, variant, caps)?;
    let mut survey_ok = true;
    for row in &table.rows {
        let inst = SigmaInstance::new(order, t, &row.x, caps)?;
        let full = !inst.sigma_fixpoint(variant).fixpoint.is_empty();
        if row.generic_generated != full {
            survey_ok = false;
        }
    }
    checks.push(CheckResult {
        name: "truncated-survey-matches-fixpoint",
        passed: survey_ok,
        detail: String::new(),
    });

    // forcing bridge: semantic relation iff syntactic relation densely below
    let mut bridge = true;
    let mut names: Vec<PName> = t.potential_elements();
    names.push(t.clone());
    let n = order.len();
    for p in 0..n {
        for s in &names {
            for tt in &names {
                let sem = fc.forces_membership(p, s, tt);
                let syn_dense = (0..n).filter(|&r| order.leq(r, p)).all(|r| {
                    (0..n).any(|q| {
                        order.leq(q, r) && fc.forces_membership_syntactic(q, s, tt)
                    })
                });
                if sem != syn_dense {
                    bridge = false;
                }
            }
        }
    }
    checks.push(CheckResult {
        name: "forcing-bridge",
        passed: bridge,
        detail: String::new(),
    });

    Ok(VerifyReport { checks })
}
