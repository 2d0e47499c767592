//! The Sigma construction: supercondition space, the antitone level
//! iteration, its fixpoint and stabilization index, the uniform bound
//! lambda*, the decision procedure for "X = t[G] for some generic G",
//! constructive generic building, and the open-question probe.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::forcing::ForcingContext;
use crate::hf::{self, HfSet};
use crate::names::PName;
use crate::oracle;
use crate::order::{indices_to_mask, CondMask, Filter, Quasiorder};

/// Hard packing limit on |pe t| in the internal representation.
const MAX_PE_HARD: usize = 8;
const MAX_X_HARD: usize = 254;

/// Size limits on instances. Defaults keep the supercondition space
/// enumerable; overriding them is allowed but can blow up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_conditions: usize,
    pub max_potential_elements: usize,
    pub max_x_elements: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_conditions: 16, max_potential_elements: 8, max_x_elements: 8 }
    }
}

/// How the successor-level requirements of the iteration are read.
///
/// `Coupled` is the literal one-witness-per-(D, s, x)-triple reading; it is
/// vacuous when X or pe t is empty and then disagrees with the brute-force
/// oracle. `Separated` (the default) demands a witness per requirement
/// family and restores the equivalence on degenerate inputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StepVariant {
    #[default]
    Separated,
    Coupled,
}

impl fmt::Display for StepVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepVariant::Separated => write!(f, "separated"),
            StepVariant::Coupled => write!(f, "coupled"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SigmaError {
    #[error("X is not transitive")]
    XNotTransitive,
    #[error("t is not forced transitive")]
    NotForcedTransitive,
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("start supercondition is not in the fixpoint")]
    NotInFixpoint,
    #[error("fixpoint is empty")]
    EmptyFixpoint,
    #[error("fixpoint violation: {0}")]
    FixpointViolation(String),
    #[error(transparent)]
    Hf(#[from] hf::HfError),
}

/// A pair of a condition and a finite assignment from names to sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Supercondition {
    pub cond: usize,
    pub assign: BTreeMap<PName, HfSet>,
}

impl Supercondition {
    pub fn render(&self, order: &Quasiorder, name_id: impl Fn(&PName) -> String) -> String {
        let parts: Vec<String> = self
            .assign
            .iter()
            .map(|(s, v)| format!("{}->{}", name_id(s), v))
            .collect();
        format!("<{},{{{}}}>", order.id(self.cond), parts.join(","))
    }
}

/// supercondition ordering: `a <= b` iff the conditions compare in P and
/// a's assignment extends b's as a function.
pub fn sc_leq(order: &Quasiorder, a: &Supercondition, b: &Supercondition) -> bool {
    order.leq(a.cond, b.cond)
        && b.assign
            .iter()
            .all(|(s, v)| a.assign.get(s) == Some(v))
}

/// The recorded level sequence of one iteration run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaTrace {
    /// `levels[gamma]` is Sigma_gamma; the last two entries are equal.
    pub levels: Vec<BTreeSet<Supercondition>>,
    /// First index at which two consecutive levels coincide.
    pub lambda: usize,
    pub fixpoint: BTreeSet<Supercondition>,
    pub variant: StepVariant,
}

/// Answer of the decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub generic_generated: bool,
    pub lambda: usize,
    pub witness: Option<Supercondition>,
    pub oracle_agreement: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct FusionStep {
    pub requirement: String,
    pub chosen: Supercondition,
}

/// Result of the constructive generic build.
#[derive(Clone, Debug)]
pub struct GenericBuild {
    pub filter: Filter,
    pub assignment: BTreeMap<PName, HfSet>,
    pub steps: Vec<FusionStep>,
}

#[derive(Clone, Debug)]
pub struct ProbeEntry {
    pub filter: Filter,
    pub interpretation: HfSet,
    pub matches: bool,
}

/// Observational report on the closing question: does every generic filter
/// inside the condition projection of the fixpoint interpret t as X?
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub entries: Vec<ProbeEntry>,
    pub counterexample: Option<Filter>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyRow {
    pub x: HfSet,
    pub generic_generated: bool,
}

/// Bounded-rank classification table computed with the uniform bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyTable {
    pub lambda_star: usize,
    pub rows: Vec<SurveyRow>,
}

/// Packed internal supercondition: condition index, assignment domain as a
/// bitmask over pe-t indices, values as X-element indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Sc {
    cond: u8,
    dom: u8,
    vals: [u8; MAX_PE_HARD],
}

impl Sc {
    fn ran_mask(&self) -> u16 {
        let mut m = 0;
        for i in 0..MAX_PE_HARD {
            if self.dom & (1 << i) != 0 {
                m |= 1 << self.vals[i];
            }
        }
        m
    }
}

/// One (P, t, X) problem instance with everything precomputed for the
/// iteration: forcing matrices, d-completeness, membership among X elements.
#[derive(Debug)]
pub struct SigmaInstance<'a> {
    order: &'a Quasiorder,
    t: PName,
    x: HfSet,
    pe: Vec<PName>,
    xs: Vec<HfSet>,
    /// x_mem[i][j]: xs[i] is an element of xs[j].
    x_mem: Vec<Vec<bool>>,
    /// forces_mem[p][i][j]: p forces pe[i] in pe[j].
    forces_mem: Vec<Vec<Vec<bool>>>,
    /// forces_notin_t[p][i]: p forces pe[i] notin t.
    forces_notin_t: Vec<Vec<bool>>,
    /// dcomplete[p][dom]: p is (dom)-complete for the pe-indexed domain mask.
    dcomplete: Vec<Vec<bool>>,
    minimal_mask: CondMask,
}

impl<'a> SigmaInstance<'a> {
    pub fn new(
        order: &'a Quasiorder,
        t: &PName,
        x: &HfSet,
        caps: Caps,
    ) -> Result<Self, SigmaError> {
        if order.len() > caps.max_conditions {
            return Err(SigmaError::CapExceeded(format!(
                "|P| = {} > {}",
                order.len(),
                caps.max_conditions
            )));
        }
        if !x.is_transitive() {
            return Err(SigmaError::XNotTransitive);
        }
        let fc = ForcingContext::new(order);
        if !fc.forces_transitive(t) {
            return Err(SigmaError::NotForcedTransitive);
        }
        let pe = t.potential_elements();
        if pe.len() > caps.max_potential_elements.min(MAX_PE_HARD) {
            return Err(SigmaError::CapExceeded(format!(
                "|pe t| = {} > {}",
                pe.len(),
                caps.max_potential_elements.min(MAX_PE_HARD)
            )));
        }
        let xs: Vec<HfSet> = x.children().to_vec();
        if xs.len() > caps.max_x_elements.min(MAX_X_HARD) {
            return Err(SigmaError::CapExceeded(format!(
                "|X| = {} > {}",
                xs.len(),
                caps.max_x_elements.min(MAX_X_HARD)
            )));
        }
        let n = order.len();
        let x_mem: Vec<Vec<bool>> = xs
            .iter()
            .map(|xi| xs.iter().map(|xj| xj.contains(xi)).collect())
            .collect();
        let forces_mem: Vec<Vec<Vec<bool>>> = (0..n)
            .map(|p| {
                pe.iter()
                    .map(|s| pe.iter().map(|s2| fc.forces_membership(p, s, s2)).collect())
                    .collect()
            })
            .collect();
        let forces_nonmem: Vec<Vec<Vec<bool>>> = (0..n)
            .map(|p| {
                pe.iter()
                    .map(|s| {
                        pe.iter()
                            .map(|s2| fc.forces_nonmembership(p, s, s2))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let forces_in_t: Vec<Vec<bool>> = (0..n)
            .map(|p| pe.iter().map(|s| fc.forces_membership(p, s, t)).collect())
            .collect();
        let forces_notin_t: Vec<Vec<bool>> = (0..n)
            .map(|p| pe.iter().map(|s| fc.forces_nonmembership(p, s, t)).collect())
            .collect();
        let dcomplete: Vec<Vec<bool>> = (0..n)
            .map(|p| {
                (0u32..(1 << pe.len()))
                    .map(|dom| {
                        let idx: Vec<usize> =
                            (0..pe.len()).filter(|i| dom & (1 << i) != 0).collect();
                        idx.iter().all(|&i| forces_in_t[p][i])
                            && idx.iter().all(|&i| {
                                idx.iter().all(|&j| {
                                    forces_mem[p][i][j] || forces_nonmem[p][i][j]
                                })
                            })
                    })
                    .collect()
            })
            .collect();
        let minimal_mask = order
            .minimal_classes()
            .into_iter()
            .fold(0, |m, class| m | indices_to_mask(&class));
        Ok(SigmaInstance {
            order,
            t: t.clone(),
            x: x.clone(),
            pe,
            xs,
            x_mem,
            forces_mem,
            forces_notin_t,
            dcomplete,
            minimal_mask,
        })
    }

    pub fn order(&self) -> &Quasiorder {
        self.order
    }

    pub fn name(&self) -> &PName {
        &self.t
    }

    pub fn x(&self) -> &HfSet {
        &self.x
    }

    pub fn potential_elements(&self) -> &[PName] {
        &self.pe
    }

    // ---- internal <-> public conversion ----

    fn to_public(&self, sc: &Sc) -> Supercondition {
        let mut assign = BTreeMap::new();
        for i in 0..self.pe.len() {
            if sc.dom & (1 << i) != 0 {
                assign.insert(self.pe[i].clone(), self.xs[sc.vals[i] as usize].clone());
            }
        }
        Supercondition { cond: sc.cond as usize, assign }
    }

    fn to_internal(&self, sc: &Supercondition) -> Option<Sc> {
        if sc.cond >= self.order.len() {
            return None;
        }
        let mut dom = 0u8;
        let mut vals = [0u8; MAX_PE_HARD];
        for (s, v) in &sc.assign {
            let i = self.pe.iter().position(|p| p == s)?;
            let j = self.xs.iter().position(|x| x == v)?;
            dom |= 1 << i;
            vals[i] = j as u8;
        }
        Some(Sc { cond: sc.cond as u8, dom, vals })
    }

    fn publicize(&self, level: &[Sc]) -> BTreeSet<Supercondition> {
        level.iter().map(|sc| self.to_public(sc)).collect()
    }

    // ---- supercondition space ----

    fn dpa_internal(&self) -> Vec<Sc> {
        let mut out = Vec::new();
        for p in 0..self.order.len() {
            for dom in 0u32..(1 << self.pe.len()) {
                if !self.dcomplete[p][dom as usize] {
                    continue;
                }
                let idx: Vec<usize> =
                    (0..self.pe.len()).filter(|i| dom & (1 << i) != 0).collect();
                if !idx.is_empty() && self.xs.is_empty() {
                    continue;
                }
                let mut vals = [0u8; MAX_PE_HARD];
                self.emit_assignments(p as u8, dom as u8, &idx, 0, &mut vals, &mut out);
            }
        }
        out.sort_unstable();
        out
    }

    fn emit_assignments(
        &self,
        p: u8,
        dom: u8,
        idx: &[usize],
        k: usize,
        vals: &mut [u8; MAX_PE_HARD],
        out: &mut Vec<Sc>,
    ) {
        if k == idx.len() {
            out.push(Sc { cond: p, dom, vals: *vals });
            return;
        }
        for j in 0..self.xs.len() {
            vals[idx[k]] = j as u8;
            self.emit_assignments(p, dom, idx, k + 1, vals, out);
        }
        vals[idx[k]] = 0;
    }

    /// All superconditions of the instance: pairs with domain inside pe t,
    /// range inside X, and a (domain)-complete condition.
    pub fn superconditions(&self) -> BTreeSet<Supercondition> {
        self.publicize(&self.dpa_internal())
    }

    fn consistent0(&self, sc: &Sc) -> bool {
        let p = sc.cond as usize;
        for i in 0..self.pe.len() {
            if sc.dom & (1 << i) == 0 {
                continue;
            }
            for j in 0..self.pe.len() {
                if sc.dom & (1 << j) == 0 {
                    continue;
                }
                let holds = self.x_mem[sc.vals[i] as usize][sc.vals[j] as usize];
                if self.forces_mem[p][i][j] != holds {
                    return false;
                }
            }
        }
        true
    }

    fn level0_internal(&self) -> Vec<Sc> {
        self.dpa_internal()
            .into_iter()
            .filter(|sc| self.consistent0(sc))
            .collect()
    }

    /// Sigma_0: superconditions whose forced membership facts between
    /// assigned names match actual membership between the assigned values.
    pub fn sigma_level0(&self) -> BTreeSet<Supercondition> {
        self.publicize(&self.level0_internal())
    }

    fn sc_leq_int(&self, a: &Sc, b: &Sc) -> bool {
        if !self.order.leq(a.cond as usize, b.cond as usize) {
            return false;
        }
        if b.dom & !a.dom != 0 {
            return false;
        }
        for i in 0..self.pe.len() {
            if b.dom & (1 << i) != 0 && a.vals[i] != b.vals[i] {
                return false;
            }
        }
        true
    }

    fn survives(&self, exts: &[&Sc], variant: StepVariant) -> bool {
        let pe_len = self.pe.len();
        let xs_len = self.xs.len();
        match variant {
            StepVariant::Separated => {
                // (i) witnesses meet every dense set (cone criterion)
                let qmask: CondMask =
                    exts.iter().fold(0, |m, e| m | (1 << e.cond as usize));
                if !self.order.meets_every_dense_mask(qmask) {
                    return false;
                }
                // (ii) every potential element is brought in or forced out
                for i in 0..pe_len {
                    let ok = exts.iter().any(|e| {
                        e.dom & (1 << i) != 0 || self.forces_notin_t[e.cond as usize][i]
                    });
                    if !ok {
                        return false;
                    }
                }
                // (iii) every element of X enters some witness range
                for j in 0..xs_len {
                    let ok = exts.iter().any(|e| e.ran_mask() & (1 << j) != 0);
                    if !ok {
                        return false;
                    }
                }
                true
            }
            StepVariant::Coupled => {
                // one witness per (dense D, s, x) triple; evaluated per (s, x)
                // via the cone criterion over the eligible witness conditions
                for i in 0..pe_len {
                    for j in 0..xs_len {
                        let qmask: CondMask = exts
                            .iter()
                            .filter(|e| {
                                e.ran_mask() & (1 << j) != 0
                                    && (e.dom & (1 << i) != 0
                                        || self.forces_notin_t[e.cond as usize][i])
                            })
                            .fold(0, |m, e| m | (1 << e.cond as usize));
                        if !self.order.meets_every_dense_mask(qmask) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    fn step_internal(&self, level: &[Sc], variant: StepVariant) -> Vec<Sc> {
        level
            .iter()
            .filter(|sc| {
                let exts: Vec<&Sc> =
                    level.iter().filter(|e| self.sc_leq_int(e, sc)).collect();
                self.survives(&exts, variant)
            })
            .copied()
            .collect()
    }

    /// One successor step of the iteration on an arbitrary sub-level of the
    /// supercondition space.
    pub fn sigma_step(
        &self,
        level: &BTreeSet<Supercondition>,
        variant: StepVariant,
    ) -> BTreeSet<Supercondition> {
        let internal: Vec<Sc> = level
            .iter()
            .filter_map(|sc| self.to_internal(sc))
            .collect();
        self.publicize(&self.step_internal(&internal, variant))
    }

    fn fixpoint_internal(&self, variant: StepVariant) -> (Vec<Vec<Sc>>, usize) {
        let mut levels = vec![self.level0_internal()];
        loop {
            let next = self.step_internal(levels.last().unwrap(), variant);
            let stable = &next == levels.last().unwrap();
            levels.push(next);
            if stable {
                let lambda = levels.len() - 2;
                return (levels, lambda);
            }
        }
    }

    /// Runs the iteration to its fixpoint, recording every level.
    pub fn sigma_fixpoint(&self, variant: StepVariant) -> SigmaTrace {
        let (levels, lambda) = self.fixpoint_internal(variant);
        let public: Vec<BTreeSet<Supercondition>> =
            levels.iter().map(|l| self.publicize(l)).collect();
        let fixpoint = public[lambda].clone();
        SigmaTrace { levels: public, lambda, fixpoint, variant }
    }

    /// True iff the level reproduces itself under one step; on the fixpoint
    /// this is exactly the extension property for fixpoint members.
    pub fn is_sigma_stable(
        &self,
        level: &BTreeSet<Supercondition>,
        variant: StepVariant,
    ) -> bool {
        &self.sigma_step(level, variant) == level
    }

    /// Projection of the fixpoint onto condition indices, sorted.
    pub fn sigma_hat(&self, variant: StepVariant) -> Vec<usize> {
        let (levels, lambda) = self.fixpoint_internal(variant);
        let mut conds: Vec<usize> =
            levels[lambda].iter().map(|sc| sc.cond as usize).collect();
        conds.sort_unstable();
        conds.dedup();
        conds
    }

    /// Deterministic fusion: starting from a fixpoint member, satisfy every
    /// range requirement, every potential-element requirement, then descend
    /// into the dense set of minimal conditions, picking the canonically
    /// least valid extension inside the fixpoint at each step.
    pub fn build_generic(
        &self,
        start: &Supercondition,
        variant: StepVariant,
    ) -> Result<GenericBuild, SigmaError> {
        let (levels, lambda) = self.fixpoint_internal(variant);
        let fix = &levels[lambda];
        let start_int = self.to_internal(start).ok_or(SigmaError::NotInFixpoint)?;
        if !fix.contains(&start_int) {
            return Err(SigmaError::NotInFixpoint);
        }
        let mut current = start_int;
        let mut steps = Vec::new();
        let fuse = |current: &mut Sc,
                        steps: &mut Vec<FusionStep>,
                        requirement: String,
                        pred: &dyn Fn(&Sc) -> bool|
         -> Result<(), SigmaError> {
            let candidates: Vec<&Sc> = fix
                .iter()
                .filter(|e| self.sc_leq_int(e, current) && pred(e))
                .collect();
            let chosen = candidates
                .iter()
                .map(|e| (self.to_public(e), **e))
                .min_by(|a, b| a.0.cmp(&b.0))
                .ok_or_else(|| {
                    SigmaError::FixpointViolation(format!(
                        "no extension for requirement `{requirement}`"
                    ))
                })?;
            steps.push(FusionStep { requirement, chosen: chosen.0 });
            *current = chosen.1;
            Ok(())
        };
        for j in 0..self.xs.len() {
            fuse(
                &mut current,
                &mut steps,
                format!("range covers {}", self.xs[j]),
                &|e: &Sc| e.ran_mask() & (1 << j) != 0,
            )?;
        }
        for i in 0..self.pe.len() {
            fuse(
                &mut current,
                &mut steps,
                format!("potential element #{i} settled"),
                &|e: &Sc| {
                    e.dom & (1 << i) != 0 || self.forces_notin_t[e.cond as usize][i]
                },
            )?;
        }
        let minimal = self.minimal_mask;
        fuse(
            &mut current,
            &mut steps,
            "descend to a minimal condition".to_string(),
            &|e: &Sc| minimal & (1 << e.cond as usize) != 0,
        )?;
        let filter =
            Filter::from_mask_unchecked(self.order.upward_closure(1 << current.cond as usize));
        if !filter.contains(start_int.cond as usize) {
            return Err(SigmaError::FixpointViolation(
                "start condition not in the built filter".to_string(),
            ));
        }
        let value = self.t.interpret(&filter);
        if value != self.x {
            return Err(SigmaError::FixpointViolation(format!(
                "built generic interprets t as {value}, expected {}",
                self.x
            )));
        }
        let assignment = self.to_public(&current).assign;
        Ok(GenericBuild { filter, assignment, steps })
    }

    /// Enumerates the generic filters contained in the condition projection
    /// of the fixpoint and reports whether each interprets t as X.
    pub fn probe_open_question(
        &self,
        variant: StepVariant,
    ) -> Result<ProbeReport, SigmaError> {
        let (levels, lambda) = self.fixpoint_internal(variant);
        if levels[lambda].is_empty() {
            return Err(SigmaError::EmptyFixpoint);
        }
        let hat_mask: CondMask = levels[lambda]
            .iter()
            .fold(0, |m, sc| m | (1 << sc.cond as usize));
        let mut entries = Vec::new();
        let mut counterexample = None;
        for g in self.order.generic_filters() {
            if g.mask() & !hat_mask != 0 {
                continue;
            }
            let interpretation = self.t.interpret(&g);
            let matches = interpretation == self.x;
            if !matches && counterexample.is_none() {
                counterexample = Some(g);
            }
            entries.push(ProbeEntry { filter: g, interpretation, matches });
        }
        Ok(ProbeReport { entries, counterexample })
    }
}

/// Decides whether X equals t[G] for some generic filter G.
pub fn check_generic_generated(
    order: &Quasiorder,
    t: &PName,
    x: &HfSet,
    variant: StepVariant,
    with_oracle: bool,
    caps: Caps,
) -> Result<Verdict, SigmaError> {
    let inst = SigmaInstance::new(order, t, x, caps)?;
    let trace = inst.sigma_fixpoint(variant);
    let generic_generated = !trace.fixpoint.is_empty();
    let witness = trace.fixpoint.iter().next().cloned();
    let oracle_agreement = if with_oracle {
        let catalog = oracle::generic_sets(order, t)
            .map_err(|_| SigmaError::NotForcedTransitive)?;
        Some(catalog.values.contains(x) == generic_generated)
    } else {
        None
    };
    Ok(Verdict { generic_generated, lambda: trace.lambda, witness, oracle_agreement })
}

/// The least strict uniform bound on stabilization indices over generic
/// values of t: `1 + max over generic G of lambda(t[G], t)`.
pub fn lambda_star(
    order: &Quasiorder,
    t: &PName,
    variant: StepVariant,
    caps: Caps,
) -> Result<usize, SigmaError> {
    let fc = ForcingContext::new(order);
    if !fc.forces_transitive(t) {
        return Err(SigmaError::NotForcedTransitive);
    }
    let mut max_lambda = 0;
    for g in order.generic_filters() {
        let x = t.interpret(&g);
        let inst = SigmaInstance::new(order, t, &x, caps)?;
        let (_, lambda) = inst.fixpoint_internal(variant);
        max_lambda = max_lambda.max(lambda);
    }
    Ok(1 + max_lambda)
}

/// Classifies every transitive set within the rank/size bounds using only
/// levels up to lambda*+1: generated iff the level sequence has stabilized
/// by lambda* on a nonempty set.
pub fn classify_by_bound(
    order: &Quasiorder,
    t: &PName,
    max_rank: u32,
    max_size: usize,
    variant: StepVariant,
    caps: Caps,
) -> Result<SurveyTable, SigmaError> {
    let bound = lambda_star(order, t, variant, caps)?;
    let mut rows = Vec::new();
    for x in hf::enumerate_transitive_sets(max_rank, max_size)? {
        let inst = SigmaInstance::new(order, t, &x, caps)?;
        let mut levels = vec![inst.level0_internal()];
        let mut stabilized_at = None;
        for gamma in 0..=bound {
            let next = inst.step_internal(levels.last().unwrap(), variant);
            let stable = &next == levels.last().unwrap();
            levels.push(next);
            if stable {
                stabilized_at = Some(gamma);
                break;
            }
        }
        let generic_generated = match stabilized_at {
            Some(gamma) => gamma < bound && !levels[gamma].is_empty(),
            None => false,
        };
        rows.push(SurveyRow { x, generic_generated });
    }
    Ok(SurveyTable { lambda_star: bound, rows })
}
