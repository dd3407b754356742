//! The one-shot checker behind `membranes <spec> <config> <formula>`.

use membranes::cli::run_check_cli;

fn main() {
    let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/models/divisors.memb");
    let init = "< M1 | a^12 tic < M2 | empty > >";
    for formula in [
        "nu Z . (isAlive(M2) /\\ [.] (~ isAlive(M2) \\/ [.] Z))",
        "E <> { count(M1, d) divides 12 }",
        "[] isAlive(M2)",
    ] {
        let code = run_check_cli(
            ["membranes", "-v", spec, init, formula],
            &mut std::io::stdout(),
            &mut std::io::stderr(),
        );
        println!("exit status {code}\n");
    }
}
