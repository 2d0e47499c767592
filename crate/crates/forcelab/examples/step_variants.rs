//! The two readings of the successor step disagree on a degenerate
//! instance. With t1 = {(zero, e)} every generic filter gives t1[G] = {0},
//! so X = {} is never generic-generated. The separated step (default)
//! answers accordingly; the coupled step quantifies per
//! (potential element, X element) pair, which is vacuous when X is empty,
//! and keeps the full level forever.
//!
//! Run with: cargo run --example step_variants

use forcelab::hf::HfSet;
use forcelab::sigma::check_generic_generated;
use forcelab::{parse_spec, Caps, StepVariant};

fn main() {
    let spec = parse_spec(include_str!("../fixtures/degenerate.fs")).unwrap();
    let t1 = spec.name("t1").unwrap();
    let x = HfSet::empty();

    for variant in [StepVariant::Separated, StepVariant::Coupled] {
        let v =
            check_generic_generated(&spec.poset, t1, &x, variant, true, Caps::default())
                .unwrap();
        println!(
            "{variant}: generated={} lambda={} oracle_agrees={}",
            v.generic_generated,
            v.lambda,
            v.oracle_agreement.unwrap(),
        );
    }
}
