//! Branching-time properties: a fixpoint formula and a CTL formula.

use membranes::check::{check, ctl_to_mu, DEFAULT_MAX_STATES};
use membranes::engine::{Bounds, Engine};
use membranes::lang::{parse_configuration, parse_formula, parse_spec, PriorityMode};

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/models/divisors.memb")).unwrap();
    let spec = parse_spec(&text).unwrap();
    let c = parse_configuration("< M1 | a^12 tic < M2 | empty > >", &spec).unwrap();
    let g = Engine::new(&spec, PriorityMode::Strong)
        .build_graph(&c, Bounds::default(), DEFAULT_MAX_STATES, None)
        .unwrap();
    println!("{} states, {} edges", g.states.len(), g.edge_count());

    // M2 is only ever dissolved in an odd step.
    let odd = parse_formula("nu Z . (isAlive(M2) /\\ [.] (~ isAlive(M2) \\/ [.] Z))").unwrap();
    println!("{odd}: {}", check(&g, &odd).unwrap().holds());

    let some = parse_formula("E <> { count(M1, d) divides 12 }").unwrap();
    println!("{some}: {}", check(&g, &some).unwrap().holds());
    println!("  as a fixpoint: {}", ctl_to_mu(&some).unwrap());
}
