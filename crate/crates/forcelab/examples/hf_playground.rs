//! Hereditarily finite sets: parsing, canonical form, Ackermann codes, and
//! the bounded enumeration of transitive sets.
//!
//! Run with: cargo run --example hf_playground

use forcelab::hf::{enumerate_transitive_sets, parse_hf};

fn main() {
    // duplicates and order vanish in canonical form
    let x = parse_hf("{{},{{}},{}}").unwrap();
    println!("canonical: {x}");
    println!("rank = {}, code = {}", x.rank(), x.ackermann_code().unwrap());
    println!("transitive? {}", x.is_transitive());

    let pair = parse_hf("{{{}}}").unwrap();
    println!("{pair} transitive? {}", pair.is_transitive());

    println!("\ntransitive sets of rank <= 3, closure size <= 5:");
    for t in enumerate_transitive_sets(3, 5).unwrap() {
        println!("  code {:>5}  {t}", t.ackermann_code().unwrap());
    }
}
