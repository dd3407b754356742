//! Halting configurations of the divisor calculator.
//!
//! cargo run --example divisors -- 12

use membranes::engine::{Bounds, Engine, Search};
use membranes::lang::{parse_configuration, parse_spec, PriorityMode};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/models/divisors.memb")).unwrap();
    let spec = parse_spec(&text).unwrap();
    let init = parse_configuration(&format!("< M1 | a^{n} tic < M2 | empty > >"), &spec).unwrap();

    let found = Engine::new(&spec, PriorityMode::Strong).compute(&init, Bounds::default(), Search::Bfs, None);
    for (i, c) in found.solutions.iter().enumerate() {
        println!("Solution {}:\t{c}", i + 1);
    }
}
