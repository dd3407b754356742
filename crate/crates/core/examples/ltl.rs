//! LTL checking with a counterexample trace.

use membranes::check::{check_ltl, format_trace, DEFAULT_MAX_STATES};
use membranes::engine::{Bounds, Engine};
use membranes::lang::{parse_configuration, parse_formula, parse_spec, PriorityMode};

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/models/divisors.memb")).unwrap();
    let spec = parse_spec(&text).unwrap();
    let engine = Engine::new(&spec, PriorityMode::Strong);

    for (init, formula) in [
        ("< M1 | a^12 tic < M2 | empty > >", "[] ({ count(M1, d) = 0 } \\/ { count(M1, d) divides 12 })"),
        ("< M2 | a a d d tic >", "[] (contains(M2, tac) -> O contains(M2, tic))"),
    ] {
        let c = parse_configuration(init, &spec).unwrap();
        let g = engine.build_graph(&c, Bounds::default(), DEFAULT_MAX_STATES, None).unwrap();
        let v = check_ltl(&g, &parse_formula(formula).unwrap()).unwrap();
        println!("{init} |= {formula}: {} ({} states)", v.holds(), g.states.len());
        print!("{}", format_trace(&v, &g));
    }
}
