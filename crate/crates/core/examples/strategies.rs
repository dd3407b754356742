//! The strategy expressions that realise rule priorities.

use membranes::engine::{strong_priority_expression, weak_priority_expression};
use membranes::lang::parse_spec;
use membranes::model::MembraneName;

const LATTICE: &str = "
membrane M is
  ev r1 : a -> a .  ev r2 : a -> a .  ev r3 : a -> a .  ev r4 : a -> a .
  ev r5 : a -> a .  ev r6 : a -> a .  ev r7 : a -> a .  ev r8 : a -> a .
  pr r1 > r5 .  pr r2 > r5 .  pr r2 > r6 .
  pr r4 > r7 .  pr r6 > r8 .  pr r7 > r8 .
end
";

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/models/divisors.memb")).unwrap();
    let divisors = parse_spec(&text).unwrap();
    let m2 = divisors.membrane(&MembraneName::new("M2")).unwrap();
    println!("M2 weak:   {}", weak_priority_expression(m2));
    println!("M2 strong: {}", strong_priority_expression(m2));

    let lattice = parse_spec(LATTICE).unwrap();
    let m = lattice.membrane(&MembraneName::new("M")).unwrap();
    println!("lattice weak: {}", weak_priority_expression(m));
}
