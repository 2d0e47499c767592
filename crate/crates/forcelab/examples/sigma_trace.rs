//! Runs the supercondition iteration to its fixpoint and prints every
//! level, for X = {0, 1} over the bundled instance. The fixpoint is
//! nonempty, so X is the value of t under some generic filter.
//!
//! Run with: cargo run --example sigma_trace

use forcelab::hf::parse_hf;
use forcelab::{parse_spec, Caps, SigmaInstance, StepVariant};

fn main() {
    let spec = parse_spec(include_str!("../fixtures/cohen2.fs")).unwrap();
    let t = spec.name("t").unwrap();
    let x = parse_hf("{{},{{}}}").unwrap();

    let inst = SigmaInstance::new(&spec.poset, t, &x, Caps::default()).unwrap();
    let trace = inst.sigma_fixpoint(StepVariant::Separated);

    let label = |n: &forcelab::PName| {
        spec.id_of_name(n).unwrap_or("?").to_string()
    };
    for (gamma, level) in trace.levels.iter().enumerate() {
        println!("Sigma_{gamma}: {} member(s)", level.len());
        for sc in level {
            println!("  {}", sc.render(&spec.poset, label));
        }
    }
    println!("stabilized at lambda = {}", trace.lambda);
}
