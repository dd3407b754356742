//! Evolution: rule matching, the maximal parallel step and the search for
//! halting configurations.

mod compute;
mod matching;
mod membrane;
mod step;
mod strategy;

pub use compute::{compute_irreducible, Bounds, Search, Solutions};
pub use matching::{applicable_instances, RuleInstance, Site, Substitution};
pub use membrane::{apply_instance, locally_enabled, membrane_max_parallel, Outcome};
pub use step::{apply_dissolutions, apply_divisions, communicate, evolution_step, Engine, StepResult};
pub use strategy::{strong_priority_body, strong_priority_expression, weak_priority_expression, StratExpr};
