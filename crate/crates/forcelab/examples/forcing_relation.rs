//! The forcing relation p ||- s in t, evaluated two independent ways:
//! semantically (quantifying over all generic filters through p) and
//! syntactically (density below p). The two always agree on membership.
//!
//! Run with: cargo run --example forcing_relation

use forcelab::{parse_spec, ForcingContext};

fn main() {
    let spec = parse_spec(include_str!("../fixtures/cohen2.fs")).unwrap();
    let q = &spec.poset;
    let fc = ForcingContext::new(q);
    let zero = spec.name("zero").unwrap();
    let s0 = spec.name("s0").unwrap();
    let t = spec.name("t").unwrap();

    // zero in s0 depends on which branch the generic takes: under a the
    // value s0[G] is {0}, under b it is 0. So only conditions at or below
    // a or b decide it; the root e does not.
    println!("{:>4}  {:>10} {:>11} {:>7}  syntactic", "p", "zero in s0", "zero !in s0", "decides");
    for p in 0..q.len() {
        println!(
            "{:>4}  {:>10} {:>11} {:>7}  {}",
            q.id(p),
            fc.forces_membership(p, zero, s0),
            fc.forces_nonmembership(p, zero, s0),
            fc.decides(p, zero, s0),
            fc.forces_membership_syntactic(p, zero, s0),
        );
    }

    // s0 in t, by contrast, holds under every generic (s0[G] is always an
    // element of t[G]), so even the root forces it.
    assert!((0..q.len()).all(|p| fc.forces_membership(p, s0, t)));
    println!("\nevery condition forces s0 in t");
    println!("t forced transitive: {}", fc.forces_transitive(t));
}
