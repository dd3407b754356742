//! Search for halting configurations.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use super::step::Engine;
use crate::lang::{PriorityMode, SystemSpec};
use crate::model::Configuration;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Bounds {
    pub max_steps: Option<usize>,
    pub max_objects: Option<usize>,
    pub max_solutions: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Search {
    #[default]
    Bfs,
    Dfs,
}

#[derive(Clone, Debug, Default)]
pub struct Solutions {
    pub solutions: Vec<Configuration>,
    /// The solution limit was reached; more may exist.
    pub limit_hit: bool,
    pub cancelled: bool,
}

enum Verdict {
    Solution,
    Expand,
}

impl<'s> Engine<'s> {
    /// Configurations reached in at least one step where evolution stops:
    /// no successor, the object bound is reached, or the step bound is
    /// reached. Breadth-first results come level by level, each level in
    /// sorted order.
    pub fn compute(&self, init: &Configuration, bounds: Bounds, search: Search, cancel: Option<&AtomicBool>) -> Solutions {
        match search {
            Search::Bfs => self.compute_bfs(init, bounds, cancel),
            Search::Dfs => self.compute_dfs(init, bounds, cancel),
        }
    }

    fn classify(&self, c: &Configuration, depth: usize, bounds: &Bounds) -> Verdict {
        if depth == 0 {
            return Verdict::Expand;
        }
        if bounds.max_steps.is_some_and(|n| depth >= n) || bounds.max_objects.is_some_and(|n| c.num_objs_rec() >= n) {
            Verdict::Solution
        } else {
            Verdict::Expand
        }
    }

    fn compute_bfs(&self, init: &Configuration, bounds: Bounds, cancel: Option<&AtomicBool>) -> Solutions {
        let mut out = Solutions::default();
        let mut visited: HashSet<Configuration> = HashSet::new();
        visited.insert(init.clone());
        let mut level = vec![init.clone()];
        let mut depth = 0;
        while !level.is_empty() {
            if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
                out.cancelled = true;
                return out;
            }
            let expanded: Vec<(Configuration, Option<Vec<Configuration>>)> = level
                .into_par_iter()
                .map(|c| match self.classify(&c, depth, &bounds) {
                    Verdict::Solution => (c, None),
                    Verdict::Expand => {
                        let next = self.step(&c).into_iter().map(|r| r.config).collect();
                        (c, Some(next))
                    }
                })
                .collect();
            let mut next_level = Vec::new();
            for (c, succ) in expanded {
                let halted = match succ {
                    None => true,
                    Some(s) if s.is_empty() => depth > 0,
                    Some(s) => {
                        for n in s {
                            if visited.insert(n.clone()) {
                                next_level.push(n);
                            }
                        }
                        false
                    }
                };
                if halted {
                    out.solutions.push(c);
                    if bounds.max_solutions.is_some_and(|m| out.solutions.len() >= m) {
                        out.limit_hit = true;
                        return out;
                    }
                }
            }
            next_level.sort();
            level = next_level;
            depth += 1;
        }
        out
    }

    fn compute_dfs(&self, init: &Configuration, bounds: Bounds, cancel: Option<&AtomicBool>) -> Solutions {
        let mut out = Solutions::default();
        let mut visited: HashSet<Configuration> = HashSet::new();
        visited.insert(init.clone());
        let mut stack = vec![(init.clone(), 0usize)];
        while let Some((c, depth)) = stack.pop() {
            if cancel.is_some_and(|f| f.load(Ordering::Relaxed)) {
                out.cancelled = true;
                return out;
            }
            let halted = match self.classify(&c, depth, &bounds) {
                Verdict::Solution => true,
                Verdict::Expand => {
                    let succ = self.step(&c);
                    if succ.is_empty() {
                        depth > 0
                    } else {
                        for r in succ.into_iter().rev() {
                            if visited.insert(r.config.clone()) {
                                stack.push((r.config, depth + 1));
                            }
                        }
                        false
                    }
                }
            };
            if halted {
                out.solutions.push(c);
                if bounds.max_solutions.is_some_and(|m| out.solutions.len() >= m) {
                    out.limit_hit = true;
                    return out;
                }
            }
        }
        out
    }
}

/// Convenience wrapper: breadth-first, no cancellation.
pub fn compute_irreducible(init: &Configuration, spec: &SystemSpec, mode: PriorityMode, bounds: Bounds) -> Solutions {
    Engine::new(spec, mode).compute(init, bounds, Search::Bfs, None)
}
