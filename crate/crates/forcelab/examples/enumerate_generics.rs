//! Enumerates every generic filter of the bundled two-branch order and
//! shows the value each one gives the name t.
//!
//! Run with: cargo run --example enumerate_generics

use forcelab::parse_spec;

fn main() {
    let spec = parse_spec(include_str!("../fixtures/cohen2.fs")).unwrap();
    let t = spec.name("t").unwrap();

    // In a finite order the generic filters are exactly the upward closures
    // of the minimal classes, so the list below is exhaustive.
    for g in spec.poset.generic_filters() {
        println!("{}  ->  t[G] = {}", g.render(&spec.poset), t.interpret(&g));
    }
}
