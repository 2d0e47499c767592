//! Constructs a witnessing generic filter from a fixpoint member by fusion:
//! each step extends the current supercondition inside the fixpoint until
//! every requirement (range coverage, potential elements settled, minimal
//! condition reached) is met. Prints the full step log.
//!
//! Run with: cargo run --example build_generic

use forcelab::hf::parse_hf;
use forcelab::{parse_spec, Caps, SigmaInstance, StepVariant};

fn main() {
    let spec = parse_spec(include_str!("../fixtures/cohen2.fs")).unwrap();
    let t = spec.name("t").unwrap();
    let x = parse_hf("{{},{{}}}").unwrap();

    let inst = SigmaInstance::new(&spec.poset, t, &x, Caps::default()).unwrap();
    let trace = inst.sigma_fixpoint(StepVariant::Separated);
    let start = trace.fixpoint.iter().next().expect("nonempty fixpoint");

    let label =
        |n: &forcelab::PName| spec.id_of_name(n).unwrap_or("?").to_string();
    println!("start: {}", start.render(&spec.poset, label));

    let build = inst.build_generic(start, StepVariant::Separated).unwrap();
    for step in &build.steps {
        println!("{:<40} -> {}", step.requirement, step.chosen.render(&spec.poset, label));
    }
    println!("\ngeneric filter G = {}", build.filter.render(&spec.poset));
    println!("t[G] = {} (equals X, verified internally)", t.interpret(&build.filter));
}
