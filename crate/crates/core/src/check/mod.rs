//! Model checking over the graph of evolution steps.

mod graph;
mod ltl;
mod mu;
mod props;

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

pub use graph::{build_graph, Kripke, KripkeGraph, DEFAULT_MAX_STATES};
pub use ltl::{find_lasso, ltl_to_buchi, BuchiAutomaton};
pub use mu::{ctl_to_mu, denotation};
pub use props::{eval_nat, eval_prop};

use crate::lang::{Formula, Layer};
use crate::model::AppliedMultiset;

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("state space exceeds {0} states")]
    TooManyStates(usize),
    #[error("interrupted")]
    Cancelled,
    #[error("{0}")]
    Formula(String),
}

/// A path `prefix · cycle^ω`. Each entry is a state and the label of the
/// edge leaving it; the last cycle edge leads back to the first cycle state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<(usize, AppliedMultiset)>,
    pub cycle: Vec<(usize, AppliedMultiset)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Counterexample(Lasso),
    StateSet { holds: bool, states: FixedBitSet },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        match self {
            Verdict::Holds => true,
            Verdict::Counterexample(_) => false,
            Verdict::StateSet { holds, .. } => *holds,
        }
    }
}

pub fn check_ltl(graph: &KripkeGraph, phi: &Formula) -> Result<Verdict, CheckError> {
    let aut = ltl_to_buchi(phi).map_err(CheckError::Formula)?;
    let Some((prefix, cycle)) = find_lasso(graph, &aut) else {
        return Ok(Verdict::Holds);
    };
    let (prefix, cycle) = ltl::normalize_lasso(prefix, cycle);
    let label = |s: usize, t: usize| graph.label(s, t).cloned().unwrap_or_default();
    let mut lp = Vec::new();
    for (i, &s) in prefix.iter().enumerate() {
        let t = prefix.get(i + 1).copied().unwrap_or(cycle[0]);
        lp.push((s, label(s, t)));
    }
    let mut lc = Vec::new();
    for (i, &s) in cycle.iter().enumerate() {
        let t = cycle[(i + 1) % cycle.len()];
        lc.push((s, label(s, t)));
    }
    Ok(Verdict::Counterexample(Lasso { prefix: lp, cycle: lc }))
}

pub fn check_mu(graph: &KripkeGraph, phi: &Formula) -> Result<Verdict, CheckError> {
    let states = denotation(graph, phi).map_err(CheckError::Formula)?;
    Ok(Verdict::StateSet { holds: states.contains(graph.initial), states })
}

/// Dispatches on the formula's layer: LTL and propositional formulas go to
/// the automaton checker, CTL and μ-calculus to fixpoint evaluation.
pub fn check(graph: &KripkeGraph, phi: &Formula) -> Result<Verdict, CheckError> {
    match phi.layer().map_err(CheckError::Formula)? {
        Layer::Propositional | Layer::Ltl => check_ltl(graph, phi),
        Layer::Ctl => check_mu(graph, &ctl_to_mu(phi).map_err(CheckError::Formula)?),
        Layer::Mu => check_mu(graph, phi),
    }
}

/// The counterexample listing; empty for anything else.
pub fn format_trace(verdict: &Verdict, graph: &KripkeGraph) -> String {
    let Verdict::Counterexample(l) = verdict else {
        return String::new();
    };
    let mut out = String::new();
    let edge = |out: &mut String, a: &AppliedMultiset| {
        if a.is_empty() {
            out.push_str("v (stutter)\n");
        } else {
            let _ = writeln!(out, "v with {a}");
        }
    };
    for (s, a) in &l.prefix {
        let _ = writeln!(out, "| {}", graph.states[*s]);
        edge(&mut out, a);
    }
    let single = l.cycle.len() == 1;
    for (s, a) in &l.cycle {
        let _ = writeln!(out, "X {}", graph.states[*s]);
        if !single {
            edge(&mut out, a);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Bounds, Engine};
    use crate::lang::{parse_configuration, parse_formula, parse_spec, PriorityMode, SystemSpec};

    const DIVISORS: &str = "
membrane M1 is
  ev r11 : a a -> (a a d, in M2) .
  ev r12 : a -> (a, in M2) .
  ev r13 : tic -> (tic, in M2) .
end
membrane M2 is
  ev r21 : d a -> c .        ev r22 : c   -> d .
  ev r23 : tic -> tac .      ev r24 : a tac -> a tic .
  ev r25 : d tac -> d .      ev r26 : tac -> delta .
  pr r24 > r26 .
  pr r25 > r26 .
end
";

    fn graph(spec: &SystemSpec, c: &str, bounds: Bounds) -> KripkeGraph {
        let c = parse_configuration(c, spec).unwrap();
        Engine::new(spec, PriorityMode::Strong).build_graph(&c, bounds, 100_000, None).unwrap()
    }

    #[test]
    fn tac_tic_counterexample() {
        let spec = parse_spec(DIVISORS).unwrap();
        let g = graph(&spec, "< M2 | a a d d tic >", Bounds::default());
        let f = parse_formula("[] (contains(M2, tac) -> O contains(M2, tic))").unwrap();
        let v = check_ltl(&g, &f).unwrap();
        assert_eq!(
            format_trace(&v, &g),
            "| < M2 | a a d d tic >\nv with r21 r21 r23 in M2\n| < M2 | c c tac >\nv with r22 r22 r26 in M2\nX < M2 | delta d d >\n"
        );
    }

    #[test]
    fn irreducible_start_is_one_stuttering_state() {
        let spec = parse_spec(DIVISORS).unwrap();
        let g = graph(&spec, "< M1 | d >", Bounds::default());
        assert_eq!(g.states.len(), 1);
        assert_eq!(g.edges[0], vec![(0, AppliedMultiset::new())]);
        assert!(g.deadlock.contains(0));
        let v = check_ltl(&g, &parse_formula("<> false").unwrap()).unwrap();
        assert_eq!(format_trace(&v, &g), "X < M1 | d >\n");
        assert!(check_ltl(&g, &parse_formula("[] true").unwrap()).unwrap().holds());
    }

    #[test]
    fn divisors_twelve() {
        let spec = parse_spec(DIVISORS).unwrap();
        let g = graph(&spec, "< M1 | a^12 tic < M2 | empty > >", Bounds::default());
        for f in [
            "[] ({ count(M1, d) = 0 } \\/ { count(M1, d) divides 12 })",
            "nu Z . (isAlive(M2) /\\ [.] (~ isAlive(M2) \\/ [.] Z))",
            "E <> { count(M1, d) divides 12 }",
        ] {
            assert!(check(&g, &parse_formula(f).unwrap()).unwrap().holds(), "{f}");
        }
        assert!(!check(&g, &parse_formula("[] isAlive(M2)").unwrap()).unwrap().holds());
    }

    #[test]
    fn state_cap_is_an_error() {
        let spec = parse_spec(DIVISORS).unwrap();
        let c = parse_configuration("< M1 | a^12 tic < M2 | empty > >", &spec).unwrap();
        let r = Engine::new(&spec, PriorityMode::Strong).build_graph(&c, Bounds::default(), 5, None);
        assert!(matches!(r, Err(CheckError::TooManyStates(5))));
    }

    #[test]
    fn object_bound_truncates() {
        let spec = parse_spec(DIVISORS).unwrap();
        let b = Bounds { max_objects: Some(1), ..Bounds::default() };
        let g = graph(&spec, "< M1 | a a tic < M2 | empty > >", b);
        assert_eq!(g.states.len(), 1);
        assert!(g.truncated.contains(0));
    }
}
