//! The bounded-rank classification table: first the uniform stabilization
//! bound lambda* of the name, then a verdict for every transitive set
//! within rank/size bounds, computed from iteration levels up to lambda*+1
//! only.
//!
//! Run with: cargo run --example survey

use forcelab::sigma::{classify_by_bound, lambda_star};
use forcelab::{parse_spec, Caps, StepVariant};

fn main() {
    let spec = parse_spec(include_str!("../fixtures/cohen2.fs")).unwrap();
    let t = spec.name("t").unwrap();
    let caps = Caps::default();

    let bound = lambda_star(&spec.poset, t, StepVariant::Separated, caps).unwrap();
    println!("lambda*(t) = {bound}\n");

    let table =
        classify_by_bound(&spec.poset, t, 3, 5, StepVariant::Separated, caps).unwrap();
    for row in &table.rows {
        println!(
            "  {:<24} {}",
            row.x.to_string(),
            if row.generic_generated { "GENERIC-GENERATED" } else { "-" }
        );
    }
}
