//! Rules with promoters and inhibitors: a deterministic SAT run, step by
//! step.

use membranes::engine::evolution_step;
use membranes::lang::{parse_configuration, parse_spec, PriorityMode};
use membranes::model::MembraneName;

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/models/sat_promoters.memb")).unwrap();
    let spec = parse_spec(&text).unwrap();
    let init = "< M1 | < M2 | splitoken var(1) var(2) var(3) var(4) not(5, 3) not(6, 2) not(7, 4) \
                or(8, 1, 5) or(9, 6, 3) or(10, 9, 7) and(0, 8, 10) > >";
    let m2 = MembraneName::new("M2");

    for mode in [PriorityMode::Weak, PriorityMode::Strong] {
        println!("{mode} priorities:");
        let mut c = parse_configuration(init, &spec).unwrap();
        let mut step = 0;
        loop {
            let next = evolution_step(&c, &spec, mode);
            let [only] = next.as_slice() else {
                if !next.is_empty() {
                    println!("  step {} branches {} ways", step + 1, next.len());
                }
                break;
            };
            step += 1;
            c = only.config.clone();
            println!("  step {step}: {} M2 membranes", c.count_membranes(&m2));
        }
    }
}
