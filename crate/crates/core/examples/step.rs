//! One evolution step, with the rules applied in each membrane.

use membranes::engine::evolution_step;
use membranes::lang::{parse_configuration, parse_spec, PriorityMode};

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/models/divisors.memb")).unwrap();
    let spec = parse_spec(&text).unwrap();
    let c = parse_configuration("< M1 | a a a tic < M2 | d tac > >", &spec).unwrap();

    for mode in [PriorityMode::Strong, PriorityMode::Weak, PriorityMode::Ignore] {
        println!("{mode}:");
        for r in evolution_step(&c, &spec, mode) {
            println!("  {} => {}", r.applied, r.config);
        }
    }
}
