//! Runs the full per-instance verification battery on the bundled
//! instance: antitone levels, the fixpoint extension property, agreement
//! with the brute-force catalog, generic builds from every fixpoint
//! member, strictness of the uniform bound, the truncated survey, and the
//! forcing bridge.
//!
//! Run with: cargo run --example verify_suite

use forcelab::verify::verify_instance;
use forcelab::{parse_spec, Caps, StepVariant};

fn main() {
    let spec = parse_spec(include_str!("../fixtures/cohen2.fs")).unwrap();
    let t = spec.name("t").unwrap();

    let report =
        verify_instance(&spec.poset, t, StepVariant::Separated, 3, 5, Caps::default())
            .unwrap();
    for c in &report.checks {
        println!("{} {}{}", if c.passed { "PASS" } else { "FAIL" }, c.name, {
            if c.detail.is_empty() { String::new() } else { format!(" — {}", c.detail) }
        });
    }
    assert!(report.all_passed());
}
