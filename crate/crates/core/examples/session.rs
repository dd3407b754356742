//! Driving the interpreter from code, as a script would.

use std::io::Cursor;

use membranes::cli::{repl, Session};

fn main() {
    let script = format!(
        "load {dir}/divisors.memb\n\
         show strats M2 .\n\
         trans < M1 | a a a tic < M2 | d tac > > .\n\
         set priority weak\n\
         compute [2] < M1 | a^8 tic < M2 | empty > > .\n\
         check < M2 | a a d d tic >\n  satisfies [] (contains(M2, tac) -> O contains(M2, tic)) .\n",
        dir = concat!(env!("CARGO_MANIFEST_DIR"), "/models")
    );
    let mut session = Session::default();
    repl(&mut Cursor::new(script), &mut std::io::stdout(), &mut session).unwrap();
}
