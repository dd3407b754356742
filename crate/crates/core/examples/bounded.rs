//! Checking an infinite-state system up to an object bound.

use membranes::check::{check, DEFAULT_MAX_STATES};
use membranes::engine::{Bounds, Engine, Search};
use membranes::lang::{parse_configuration, parse_formula, parse_spec, PriorityMode};

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/models/nsquare.memb")).unwrap();
    let spec = parse_spec(&text).unwrap();
    let c = parse_configuration("< M1 | < M2 | < M3 | a f > > >", &spec).unwrap();
    let engine = Engine::new(&spec, PriorityMode::Strong);

    let first = engine.compute(&c, Bounds { max_solutions: Some(4), ..Bounds::default() }, Search::Bfs, None);
    for s in &first.solutions {
        println!("{s}");
    }

    let bounds = Bounds { max_objects: Some(70), ..Bounds::default() };
    let g = engine.build_graph(&c, bounds, DEFAULT_MAX_STATES, None).unwrap();
    let phi = parse_formula("[] { count(M1, d) ^ 2 = count(M1, e) }").unwrap();
    println!(
        "{phi}: {} over {} states ({} cut off at the bound)",
        check(&g, &phi).unwrap().holds(),
        g.states.len(),
        g.truncated.count_ones(..)
    );
}
