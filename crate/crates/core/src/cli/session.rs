//! Interactive command interpreter.

use std::io::{self, BufRead, Write};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::check::{check, format_trace, CheckError, Verdict, DEFAULT_MAX_STATES};
use crate::engine::{strong_priority_body, weak_priority_expression, Bounds, Engine, Search};
use crate::lang::{parse_configuration, parse_formula, parse_spec, PriorityMode, SystemSpec, TERM_COMMANDS};
use crate::model::{Configuration, MembraneName};

pub const PROMPT: &str = "Membrane> ";

const HELP: &str = "\
Commands:
  load <file>                          load a membrane specification
  show membranes                       list the loaded membranes
  show <M>                             print the definition of membrane M
  show strats <M>                      print the priority strategies of M
  set priority weak|strong|none        choose how priorities are understood
  trans <config> .                     all successors in one evolution step
  compute [n] <config> .               halting configurations, breadth first
  dfs compute [n] <config> .           halting configurations, depth first
  check [b] <config> satisfies <f> .   model check f, objects bounded by b
  help                                 this text
  quit                                 leave";

/// Whether the loop should go on after a command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Quit,
}

/// REPL state: the loaded specification and the priority mode.
pub struct Session {
    spec: Option<SystemSpec>,
    mode: PriorityMode,
    cancel: Arc<AtomicBool>,
    max_states: usize,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(Arc::new(AtomicBool::new(false)))
    }
}

struct CmdError(String);

impl<E: std::fmt::Display> From<E> for CmdError {
    fn from(e: E) -> Self {
        CmdError(e.to_string())
    }
}

type CmdResult = Result<(), CmdError>;

impl Session {
    /// `cancel` is polled by long searches; it is cleared before each
    /// command.
    pub fn new(cancel: Arc<AtomicBool>) -> Self {
        Session { spec: None, mode: PriorityMode::Strong, cancel, max_states: DEFAULT_MAX_STATES }
    }

    pub fn spec(&self) -> Option<&SystemSpec> {
        self.spec.as_ref()
    }

    pub fn mode(&self) -> PriorityMode {
        self.mode
    }

    pub fn set_max_states(&mut self, n: usize) {
        self.max_states = n;
    }

    /// Runs one complete command. Failures are reported on `out` and leave
    /// the session unchanged.
    pub fn execute(&mut self, command: &str, out: &mut dyn Write) -> io::Result<Flow> {
        self.cancel.store(false, Ordering::Relaxed);
        let cmd = command.trim();
        let cmd = cmd.strip_suffix('.').unwrap_or(cmd).trim();
        let (word, rest) = split_word(cmd);
        let r = match word {
            "" => Ok(()),
            "quit" | "q" | "exit" => return Ok(Flow::Quit),
            "help" => writeln!(out, "{HELP}").map_err(CmdError::from),
            "load" => self.load(rest, out),
            "show" => self.show(rest, out),
            "set" => self.set(rest, out),
            "trans" => self.trans(rest, out),
            "compute" => self.compute(rest, Search::Bfs, out),
            "dfs" => match split_word(rest) {
                ("compute", rest) => self.compute(rest, Search::Dfs, out),
                _ => Err(CmdError("expected 'dfs compute'".into())),
            },
            "check" => self.check(rest, out),
            other => Err(CmdError(format!("unknown command '{other}', type help for a list"))),
        };
        if let Err(CmdError(msg)) = r {
            writeln!(out, "Error: {msg}")?;
        }
        Ok(Flow::Continue)
    }

    fn spec_or_err(&self) -> Result<&SystemSpec, CmdError> {
        self.spec.as_ref().ok_or_else(|| CmdError("no specification loaded, use load <file>".into()))
    }

    fn load(&mut self, path: &str, out: &mut dyn Write) -> CmdResult {
        if path.is_empty() {
            return Err(CmdError("load needs a file name".into()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| CmdError(format!("cannot read {path}: {e}")))?;
        let spec = parse_spec(&text).map_err(|ds| {
            let lines: Vec<String> = ds.iter().map(|d| format!("{path}:{d}")).collect();
            CmdError(lines.join("\n"))
        })?;
        let commands = spec.commands.clone();
        self.spec = Some(spec);
        writeln!(out, "File {path} has been loaded.")?;
        for c in commands {
            if self.execute(&c.text, out)? == Flow::Quit {
                break;
            }
        }
        Ok(())
    }

    fn show(&self, rest: &str, out: &mut dyn Write) -> CmdResult {
        let spec = self.spec_or_err()?;
        let membrane = |name: &str| {
            spec.membrane(&MembraneName::new(name))
                .ok_or_else(|| CmdError(format!("unknown membrane {name}")))
        };
        match split_word(rest) {
            ("membranes", "") => {
                let names: Vec<&str> = spec.membrane_names().map(|n| n.as_str()).collect();
                writeln!(out, "{}", names.join(" "))?;
            }
            ("strats", name) => {
                let m = membrane(name)?;
                writeln!(out, "Weak priority: {}", weak_priority_expression(m))?;
                writeln!(out, "Strong priority: {}", strong_priority_body(m))?;
            }
            (name, "") if !name.is_empty() => write!(out, "{}", membrane(name)?)?,
            _ => return Err(CmdError("usage: show membranes | show <M> | show strats <M>".into())),
        }
        Ok(())
    }

    fn set(&mut self, rest: &str, out: &mut dyn Write) -> CmdResult {
        match split_word(rest) {
            ("priority", m) => {
                self.mode = m.parse().map_err(|_| CmdError(format!("unknown priority mode '{m}'")))?;
                writeln!(out, "Priority mode set to {}.", self.mode)?;
                Ok(())
            }
            _ => Err(CmdError("usage: set priority weak|strong|none".into())),
        }
    }

    fn config(&self, text: &str) -> Result<Configuration, CmdError> {
        let spec = self.spec_or_err()?;
        parse_configuration(text, spec).map_err(|d| CmdError(format!("in configuration: {d}")))
    }

    fn trans(&self, rest: &str, out: &mut dyn Write) -> CmdResult {
        let c = self.config(rest)?;
        let engine = Engine::new(self.spec_or_err()?, self.mode);
        for (i, r) in engine.step(&c).iter().enumerate() {
            writeln!(out, "Solution {} with {} :\n\t{}", i + 1, r.applied, r.config)?;
        }
        writeln!(out, "No more solutions.")?;
        Ok(())
    }

    fn compute(&self, rest: &str, search: Search, out: &mut dyn Write) -> CmdResult {
        let (limit, rest) = bracket(rest)?;
        let c = self.config(rest)?;
        let engine = Engine::new(self.spec_or_err()?, self.mode);
        let bounds = Bounds { max_solutions: limit, ..Bounds::default() };
        let s = engine.compute(&c, bounds, search, Some(&self.cancel));
        for (i, c) in s.solutions.iter().enumerate() {
            writeln!(out, "Solution {}:\t{c}", i + 1)?;
        }
        if s.cancelled {
            writeln!(out, "Interrupted.")?;
        } else if s.limit_hit {
            writeln!(out, "No more solutions requested.")?;
        } else {
            writeln!(out, "No more solutions.")?;
        }
        Ok(())
    }

    fn check(&self, rest: &str, out: &mut dyn Write) -> CmdResult {
        let (bound, rest) = bracket(rest)?;
        let Some((config, formula)) = split_keyword(rest, "satisfies") else {
            return Err(CmdError("usage: check [b] <config> satisfies <formula> .".into()));
        };
        let c = self.config(config)?;
        let f = parse_formula(formula).map_err(|d| CmdError(format!("in formula: {d}")))?;
        let engine = Engine::new(self.spec_or_err()?, self.mode);
        let bounds = Bounds { max_objects: bound, ..Bounds::default() };
        let g = match engine.build_graph(&c, bounds, self.max_states, Some(&self.cancel)) {
            Err(CheckError::Cancelled) => {
                writeln!(out, "Interrupted.")?;
                return Ok(());
            }
            other => other?,
        };
        let v = check(&g, &f)?;
        if g.any_truncated() {
            writeln!(out, "Warning: bounded result, some states were not expanded.")?;
        }
        if v.holds() {
            writeln!(out, "The property is satisfied.")?;
        } else {
            writeln!(out, "The property is not satisfied:")?;
            if matches!(v, Verdict::Counterexample(_)) {
                write!(out, "{}", format_trace(&v, &g))?;
            }
        }
        Ok(())
    }
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim()),
        None => (s, ""),
    }
}

/// Splits `text` at the first standalone occurrence of `kw`.
fn split_keyword<'a>(text: &'a str, kw: &str) -> Option<(&'a str, &'a str)> {
    let mut from = 0;
    while let Some(i) = text[from..].find(kw) {
        let at = from + i;
        let end = at + kw.len();
        let before = text[..at].chars().last().is_none_or(char::is_whitespace);
        let after = text[end..].chars().next().is_none_or(char::is_whitespace);
        if before && after {
            return Some((&text[..at], &text[end..]));
        }
        from = end;
    }
    None
}

/// An optional leading `[n]`.
fn bracket(s: &str) -> Result<(Option<usize>, &str), CmdError> {
    let s = s.trim_start();
    let Some(rest) = s.strip_prefix('[') else {
        return Ok((None, s));
    };
    let close = rest.find(']').ok_or_else(|| CmdError("missing ']'".into()))?;
    let n = rest[..close]
        .trim()
        .parse()
        .map_err(|_| CmdError(format!("expected a number between brackets, found '{}'", &rest[..close])))?;
    Ok((Some(n), &rest[close + 1..]))
}

/// Whether the buffered text is a complete command: term commands run
/// up to a line ending in `.`, the rest end with their line.
pub fn is_complete(buffer: &str) -> bool {
    let first = buffer.split_whitespace().next().unwrap_or("");
    !TERM_COMMANDS.contains(&first) || buffer.trim_end().ends_with('.')
}

/// Reads commands from `input` until EOF or `quit`. The exit status is
/// always 0; errors are reported inline.
pub fn repl(input: &mut dyn BufRead, output: &mut dyn Write, session: &mut Session) -> io::Result<i32> {
    let mut buffer = String::new();
    loop {
        if buffer.is_empty() {
            write!(output, "{PROMPT}")?;
            output.flush()?;
        }
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            if !buffer.trim().is_empty() {
                session.execute(&buffer, output)?;
            }
            writeln!(output)?;
            return Ok(0);
        }
        buffer.push_str(&line);
        if buffer.trim().is_empty() {
            buffer.clear();
            continue;
        }
        if is_complete(&buffer) {
            let flow = session.execute(&buffer, output)?;
            buffer.clear();
            if flow == Flow::Quit {
                return Ok(0);
            }
        }
    }
}
