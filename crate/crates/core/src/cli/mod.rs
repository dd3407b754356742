//! Front ends: the interactive session and the batch checker.

mod batch;
mod session;

pub use batch::{run_check_cli, BatchArgs};
pub use session::{is_complete, repl, Flow, Session, PROMPT};
