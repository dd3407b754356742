//! Brute-force satisfiability with membrane division.

use membranes::engine::{Bounds, Engine, Search};
use membranes::lang::{parse_configuration, parse_spec, PriorityMode};

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/models/sat.memb")).unwrap();
    let spec = parse_spec(&text).unwrap();
    let engine = Engine::new(&spec, PriorityMode::Strong);

    let formulas = [
        ("x1 and not x1", "splitoken and(0, 1, 2) var(1) not(2, 1)"),
        (
            "(x1 or x2) and (not x1 or not x2)",
            "splitoken and(0, 5, 6) var(1) var(2) not(3, 1) not(4, 2) or(5, 1, 2) or(6, 3, 4)",
        ),
    ];
    for (name, encoding) in formulas {
        let c = parse_configuration(&format!("< M1 | < M2 | {encoding} > >"), &spec).unwrap();
        let b = Bounds { max_solutions: Some(1), ..Bounds::default() };
        let found = engine.compute(&c, b, Search::Dfs, None);
        let skin = found.solutions[0].membranes()[0].contents.objects();
        let yes = skin.iter().any(|(o, _)| o.to_string() == "const(0, true)");
        println!("{name}: {}", if yes { "satisfiable" } else { "unsatisfiable" });
    }
}
