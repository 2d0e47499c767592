//! Probes the open question: if G' is a generic filter lying inside the
//! condition projection of the fixpoint for (X, t), must t[G'] = X?
//! Observational only — the answer is reported per instance, not asserted.
//!
//! Run with: cargo run --example open_question_probe

use forcelab::hf::parse_hf;
use forcelab::{parse_spec, Caps, SigmaInstance, StepVariant};

fn main() {
    let spec = parse_spec(include_str!("../fixtures/cohen2.fs")).unwrap();
    let t = spec.name("t").unwrap();

    for lit in ["{{}}", "{{},{{}}}"] {
        let x = parse_hf(lit).unwrap();
        let inst = SigmaInstance::new(&spec.poset, t, &x, Caps::default()).unwrap();
        let report = inst.probe_open_question(StepVariant::Separated).unwrap();
        println!("X = {lit}:");
        for e in &report.entries {
            println!(
                "  {}  t[G'] = {}  {}",
                e.filter.render(&spec.poset),
                e.interpretation,
                if e.matches { "matches" } else { "MISMATCH" }
            );
        }
        match &report.counterexample {
            Some(g) => println!("  counterexample: {}\n", g.render(&spec.poset)),
            None => println!("  no counterexample here\n"),
        }
    }
}
