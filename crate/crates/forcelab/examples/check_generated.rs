//! Decides "is X the value of t under some generic filter?" for a few
//! candidate sets, with the brute-force catalog attached as a cross-check.
//!
//! Run with: cargo run --example check_generated

use forcelab::hf::parse_hf;
use forcelab::sigma::check_generic_generated;
use forcelab::{parse_spec, Caps, StepVariant};

fn main() {
    let spec = parse_spec(include_str!("../fixtures/cohen2.fs")).unwrap();
    let t = spec.name("t").unwrap();

    for lit in ["{}", "{{}}", "{{},{{}}}", "{{},{{}},{{},{{}}}}"] {
        let x = parse_hf(lit).unwrap();
        let v = check_generic_generated(
            &spec.poset,
            t,
            &x,
            StepVariant::Separated,
            true, // attach the oracle
            Caps::default(),
        )
        .unwrap();
        println!(
            "X = {lit:<22} {}  lambda={}  oracle_agrees={}",
            if v.generic_generated { "GENERATED    " } else { "not generated" },
            v.lambda,
            v.oracle_agreement.unwrap(),
        );
    }
}
