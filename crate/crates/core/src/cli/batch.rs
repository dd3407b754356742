//! One-shot model checking from the command line.

use std::io::Write;
use std::time::Instant;

use clap::Parser;

use crate::check::{check, format_trace, Verdict, DEFAULT_MAX_STATES};
use crate::engine::{Bounds, Engine};
use crate::lang::{parse_configuration, parse_formula, parse_spec, PriorityMode};

/// Check a temporal property of a membrane system.
#[derive(Debug, Parser)]
#[command(name = "membranes", version)]
pub struct BatchArgs {
    /// Specification file.
    pub spec: String,
    /// Initial configuration.
    pub config: String,
    /// LTL, CTL or mu-calculus formula.
    pub formula: String,
    /// Do not expand states with at least this many objects.
    #[arg(long)]
    pub bound: Option<usize>,
    /// Do not expand states deeper than this many steps.
    #[arg(long)]
    pub steps: Option<usize>,
    /// How rule priorities are understood: weak, strong or none.
    #[arg(long, default_value = "strong")]
    pub mode: PriorityMode,
    /// Give up beyond this many states.
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    pub max_states: usize,
    /// Print graph statistics.
    #[arg(short, long)]
    pub verbose: bool,
}

/// Exit status: 0 when the property holds, 1 when it is violated and 2 on
/// any usage, input or resource error.
pub fn run_check_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match BatchArgs::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match run(&args, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "{msg}");
            2
        }
    }
}

fn run(a: &BatchArgs, out: &mut dyn Write) -> Result<i32, String> {
    let text = std::fs::read_to_string(&a.spec).map_err(|e| format!("cannot read {}: {e}", a.spec))?;
    let spec = parse_spec(&text).map_err(|ds| {
        ds.iter().map(|d| format!("{}:{d}", a.spec)).collect::<Vec<_>>().join("\n")
    })?;
    let init = parse_configuration(&a.config, &spec).map_err(|d| format!("in configuration: {d}"))?;
    let phi = parse_formula(&a.formula).map_err(|d| format!("in formula: {d}"))?;

    let t0 = Instant::now();
    let bounds = Bounds { max_steps: a.steps, max_objects: a.bound, max_solutions: None };
    let g = Engine::new(&spec, a.mode)
        .build_graph(&init, bounds, a.max_states, None)
        .map_err(|e| e.to_string())?;
    let built = t0.elapsed();
    let v = check(&g, &phi).map_err(|e| e.to_string())?;
    let w = |e: std::io::Error| e.to_string();
    if a.verbose {
        writeln!(
            out,
            "Transition graph: {} states, {} edges, built in {:.3} s; checked in {:.3} s.",
            g.states.len(),
            g.edge_count(),
            built.as_secs_f64(),
            (t0.elapsed() - built).as_secs_f64()
        )
        .map_err(w)?;
    }
    if g.any_truncated() {
        writeln!(out, "Warning: bounded result, some states were not expanded.").map_err(w)?;
    }
    let n = g.states.len();
    if v.holds() {
        writeln!(out, "The property is satisfied ({n} states).").map_err(w)?;
        Ok(0)
    } else {
        match v {
            Verdict::Counterexample(_) => {
                writeln!(out, "The property is not satisfied ({n} states):").map_err(w)?;
                write!(out, "{}", format_trace(&v, &g)).map_err(w)?;
            }
            _ => writeln!(out, "The property is not satisfied ({n} states).").map_err(w)?,
        }
        Ok(1)
    }
}
