//! The forcing relation for atomic membership formulas.
//!
//! The normative relation is semantic: over a finite order the generic
//! filters are enumerable, so `p ||- s in t` holds iff `s[G] in t[G]` for
//! every generic filter G containing p. The standard syntactic recursion is
//! kept as an independent cross-check oracle.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::hf::HfSet;
use crate::names::PName;
use crate::order::{Filter, Quasiorder};

/// Memoized forcing queries over one quasi-order.
pub struct ForcingContext<'a> {
    order: &'a Quasiorder,
    generics: Vec<Filter>,
    interp: Mutex<HashMap<(PName, u32), HfSet>>,
    sem_mem: Mutex<HashMap<(usize, PName, PName), (bool, bool)>>,
    syn_mem: Mutex<HashMap<(usize, PName, PName), bool>>,
    syn_eq: Mutex<HashMap<(usize, PName, PName), bool>>,
}

impl<'a> ForcingContext<'a> {
    pub fn new(order: &'a Quasiorder) -> Self {
        ForcingContext {
            order,
            generics: order.generic_filters(),
            interp: Mutex::new(HashMap::new()),
            sem_mem: Mutex::new(HashMap::new()),
            syn_mem: Mutex::new(HashMap::new()),
            syn_eq: Mutex::new(HashMap::new()),
        }
    }

    pub fn order(&self) -> &Quasiorder {
        self.order
    }

    pub fn generics(&self) -> &[Filter] {
        &self.generics
    }

    pub fn interpret(&self, s: &PName, g: &Filter) -> HfSet {
        let key = (s.clone(), g.mask());
        if let Some(v) = self.interp.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = s.interpret(g);
        self.interp.lock().unwrap().insert(key, v.clone());
        v
    }

    /// Evaluates both polarities at once: does every generic containing p
    /// satisfy membership, and does every one refute it.
    fn poll(&self, p: usize, s: &PName, t: &PName) -> (bool, bool) {
        let key = (p, s.clone(), t.clone());
        if let Some(&v) = self.sem_mem.lock().unwrap().get(&key) {
            return v;
        }
        let mut all_in = true;
        let mut all_out = true;
        for g in &self.generics {
            if !g.contains(p) {
                continue;
            }
            let sv = self.interpret(s, g);
            let tv = self.interpret(t, g);
            if tv.contains(&sv) {
                all_out = false;
            } else {
                all_in = false;
            }
        }
        self.sem_mem.lock().unwrap().insert(key, (all_in, all_out));
        (all_in, all_out)
    }

    /// `p ||- s in t`: s[G] in t[G] for every generic G containing p.
    pub fn forces_membership(&self, p: usize, s: &PName, t: &PName) -> bool {
        self.poll(p, s, t).0
    }

    /// `p ||- s notin t`: s[G] notin t[G] for every generic G containing p.
    pub fn forces_nonmembership(&self, p: usize, s: &PName, t: &PName) -> bool {
        self.poll(p, s, t).1
    }

    pub fn decides(&self, p: usize, s: &PName, t: &PName) -> bool {
        let (inn, out) = self.poll(p, s, t);
        inn || out
    }

    /// d-completeness: p forces `s in t` for every s in d, and p decides
    /// every membership formula between members of d.
    pub fn is_d_complete(&self, p: usize, d: &[PName], t: &PName) -> bool {
        d.iter().all(|s| self.forces_membership(p, s, t))
            && d.iter().all(|s| d.iter().all(|s2| self.decides(p, s, s2)))
    }

    /// True iff t[G] is transitive for every generic G.
    pub fn forces_transitive(&self, t: &PName) -> bool {
        self.generics
            .iter()
            .all(|g| self.interpret(t, g).is_transitive())
    }

    /// Syntactic forcing, used only to validate the semantic relation:
    /// `p ||-* s in t` iff {q : exists (u,r) in t, q <= r and q ||-* s = u}
    /// is dense below p.
    pub fn forces_membership_syntactic(&self, p: usize, s: &PName, t: &PName) -> bool {
        let key = (p, s.clone(), t.clone());
        if let Some(&v) = self.syn_mem.lock().unwrap().get(&key) {
            return v;
        }
        let n = self.order.len();
        // witnesses is downward closed, so density below p reduces to:
        // every r <= p has some witness q <= r.
        let witness = |q: usize| {
            t.entries()
                .iter()
                .any(|(u, r)| self.order.leq(q, *r) && self.forces_eq_syntactic(q, s, u))
        };
        let v = (0..n)
            .filter(|&r| self.order.leq(r, p))
            .all(|r| (0..n).any(|q| self.order.leq(q, r) && witness(q)));
        self.syn_mem.lock().unwrap().insert(key, v);
        v
    }

    /// `p ||-* s = u`: every entry of either side, at every condition below p
    /// compatible with the entry, is syntactically forced into the other side.
    fn forces_eq_syntactic(&self, p: usize, s: &PName, u: &PName) -> bool {
        let key = (p, s.clone(), u.clone());
        if let Some(&v) = self.syn_eq.lock().unwrap().get(&key) {
            return v;
        }
        let n = self.order.len();
        let side = |x: &PName, y: &PName| {
            x.entries().iter().all(|(v, r)| {
                (0..n)
                    .filter(|&q| self.order.leq(q, p) && self.order.leq(q, *r))
                    .all(|q| self.forces_membership_syntactic(q, v, y))
            })
        };
        let v = side(s, u) && side(u, s);
        self.syn_eq.lock().unwrap().insert(key, v);
        v
    }
}
