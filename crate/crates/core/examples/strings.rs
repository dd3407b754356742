//! Rules that rewrite inside string objects.

use membranes::engine::{evolution_step, Bounds, Engine, Search};
use membranes::lang::{parse_configuration, parse_spec, PriorityMode};

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/models/strings.memb")).unwrap();
    let spec = parse_spec(&text).unwrap();
    let c = parse_configuration("< M1 | (a · a · b · a) b (a · a) >", &spec).unwrap();

    for r in evolution_step(&c, &spec, PriorityMode::Strong) {
        println!("{} => {}", r.applied, r.config);
    }
    let done = Engine::new(&spec, PriorityMode::Strong).compute(&c, Bounds::default(), Search::Bfs, None);
    for s in done.solutions {
        println!("halts in {s}");
    }
}
