use std::io::{self, Write};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use membranes::cli::{repl, run_check_cli, Session};

fn main() {
    env_logger::init();
    if std::env::args_os().len() > 1 {
        let code = run_check_cli(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
        std::process::exit(code);
    }
    let cancel = Arc::new(AtomicBool::new(false));
    let flag = cancel.clone();
    if let Err(e) = ctrlc::set_handler(move || flag.store(true, Ordering::Relaxed)) {
        log::warn!("no interrupt handler: {e}");
    }
    let mut session = Session::new(cancel);
    let code = repl(&mut io::stdin().lock(), &mut io::stdout(), &mut session).unwrap_or_else(|e| {
        let _ = writeln!(io::stderr(), "{e}");
        2
    });
    std::process::exit(code);
}
