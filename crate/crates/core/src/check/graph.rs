//! The transition graph of full evolution steps.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use super::CheckError;
use crate::engine::{Bounds, Engine};
use crate::lang::{PriorityMode, Prop, SystemSpec};
use crate::model::{AppliedMultiset, Configuration};

/// Default cap on the number of states explored before giving up.
pub const DEFAULT_MAX_STATES: usize = 200_000;

/// A finite structure the checkers can run on.
pub trait Kripke {
    fn len(&self) -> usize;
    fn initial(&self) -> usize;
    fn successors(&self, s: usize) -> impl Iterator<Item = usize> + '_;
    fn holds(&self, p: &Prop, s: usize) -> bool;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct KripkeGraph {
    pub states: Vec<Configuration>,
    pub initial: usize,
    /// Outgoing edges; every state has at least one.
    pub edges: Vec<Vec<(usize, AppliedMultiset)>>,
    pub deadlock: FixedBitSet,
    pub truncated: FixedBitSet,
}

impl KripkeGraph {
    pub fn any_truncated(&self) -> bool {
        !self.truncated.is_clear()
    }

    /// First edge label from `from` to `to`, if any.
    pub fn label(&self, from: usize, to: usize) -> Option<&AppliedMultiset> {
        self.edges[from].iter().find(|(t, _)| *t == to).map(|(_, l)| l)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }
}

impl Kripke for KripkeGraph {
    fn len(&self) -> usize {
        self.states.len()
    }

    fn initial(&self) -> usize {
        self.initial
    }

    fn successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges[s].iter().map(|(t, _)| *t)
    }

    fn holds(&self, p: &Prop, s: usize) -> bool {
        super::eval_prop(p, &self.states[s])
    }
}

impl Engine<'_> {
    /// Breadth-first closure of the step relation. States at or beyond the
    /// bounds are not expanded and loop on themselves, as do deadlocks.
    pub fn build_graph(
        &self,
        init: &Configuration,
        bounds: Bounds,
        max_states: usize,
        cancel: Option<&AtomicBool>,
    ) -> Result<KripkeGraph, CheckError> {
        let mut index: HashMap<Configuration, usize> = HashMap::new();
        let mut states = vec![init.clone()];
        let mut depth = vec![0usize];
        index.insert(init.clone(), 0);
        let mut edges: Vec<Vec<(usize, AppliedMultiset)>> = vec![Vec::new()];
        let mut deadlock = FixedBitSet::new();
        let mut truncated = FixedBitSet::new();
        let mut truncated_list = Vec::new();
        let mut deadlock_list = Vec::new();

        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
                return Err(CheckError::Cancelled);
            }
            let expanded: Vec<(usize, Option<Vec<crate::engine::StepResult>>)> = frontier
                .par_iter()
                .map(|&s| {
                    let c = &states[s];
                    let cut = bounds.max_steps.is_some_and(|n| depth[s] >= n)
                        || bounds.max_objects.is_some_and(|n| c.num_objs_rec() >= n);
                    (s, if cut { None } else { Some(self.step(c)) })
                })
                .collect();
            let mut next = Vec::new();
            for (s, succ) in expanded {
                let Some(succ) = succ else {
                    truncated_list.push(s);
                    edges[s].push((s, AppliedMultiset::new()));
                    continue;
                };
                if succ.is_empty() {
                    deadlock_list.push(s);
                    edges[s].push((s, AppliedMultiset::new()));
                    continue;
                }
                for r in succ {
                    let t = match index.get(&r.config) {
                        Some(&t) => t,
                        None => {
                            let t = states.len();
                            if t >= max_states {
                                return Err(CheckError::TooManyStates(max_states));
                            }
                            index.insert(r.config.clone(), t);
                            states.push(r.config);
                            depth.push(depth[s] + 1);
                            edges.push(Vec::new());
                            next.push(t);
                            t
                        }
                    };
                    if !edges[s].iter().any(|(u, l)| *u == t && *l == r.applied) {
                        edges[s].push((t, r.applied));
                    }
                }
            }
            frontier = next;
        }
        deadlock.grow(states.len());
        truncated.grow(states.len());
        deadlock_list.into_iter().for_each(|s| deadlock.insert(s));
        truncated_list.into_iter().for_each(|s| truncated.insert(s));
        Ok(KripkeGraph { states, initial: 0, edges, deadlock, truncated })
    }
}

pub fn build_graph(
    config: &Configuration,
    spec: &SystemSpec,
    mode: PriorityMode,
    bounds: Bounds,
) -> Result<KripkeGraph, CheckError> {
    Engine::new(spec, mode).build_graph(config, bounds, DEFAULT_MAX_STATES, None)
}
