//! The maximal parallel phase inside a single membrane.

use std::collections::{BTreeSet, HashSet};

use super::matching::{applicable_instances, consumed, produced, RuleInstance};
use crate::lang::{MembraneDef, PriorityMode, PriorityRelation};
use crate::model::{Label, Multiset, Object, Soup, Symbol};

/// Filters `instances` down to those whose rule is allowed to fire now.
///
/// Weak: no rule with higher priority has an applicable instance. Strong:
/// additionally no rule with higher priority was already applied in this
/// step.
pub fn locally_enabled(
    mdef: &MembraneDef,
    instances: &[RuleInstance],
    priority: &PriorityRelation,
    mode: PriorityMode,
    applied: &Multiset<Label>,
) -> Vec<RuleInstance> {
    if mode == PriorityMode::Ignore || priority.is_empty() {
        return instances.to_vec();
    }
    let live: BTreeSet<&Label> = instances.iter().map(|i| &mdef.rules[i.rule].label).collect();
    instances
        .iter()
        .filter(|i| {
            let r = &mdef.rules[i.rule].label;
            priority.higher_than(r).all(|h| {
                !live.contains(h) && (mode == PriorityMode::Weak || applied.count(h) == 0)
            })
        })
        .cloned()
        .collect()
}

/// Applies one instance: its left-hand side leaves the loose objects and
/// its products become (frozen) target messages.
pub fn apply_instance(mdef: &MembraneDef, soup: &Soup, inst: &RuleInstance, identity: Option<&Symbol>) -> Soup {
    let mut objects = soup.objects().clone();
    let gone = consumed(mdef, inst, identity);
    for (o, n) in gone.iter() {
        let ok = objects.remove_n(o, *n);
        debug_assert!(ok, "instance not applicable");
    }
    let mut messages = soup.messages().to_vec();
    messages.extend(produced(mdef, inst, identity));
    Soup::from_parts(objects, messages, soup.membranes().to_vec())
}

/// One outcome of the maximal parallel phase: the remaining loose objects
/// plus the produced messages, and the labels that were applied.
pub type Outcome = (Soup, Multiset<Label>);

/// All outcomes of exhaustively applying enabled instances one at a time.
/// Intermediate states are memoized, so each reachable (soup, labels) pair
/// is expanded once.
pub fn membrane_max_parallel(
    mdef: &MembraneDef,
    objects: &Multiset<Object>,
    mode: PriorityMode,
    priority: &PriorityRelation,
    identity: Option<&Symbol>,
) -> Vec<Outcome> {
    let start: Outcome = (Soup::from_objects(objects.clone()), Multiset::new());
    let mut seen: HashSet<Outcome> = HashSet::new();
    let mut outcomes = BTreeSet::new();
    let mut stack = vec![start.clone()];
    seen.insert(start);
    while let Some((soup, applied)) = stack.pop() {
        let all = applicable_instances(mdef, soup.objects(), objects, identity);
        let enabled = locally_enabled(mdef, &all, priority, mode, &applied);
        if enabled.is_empty() {
            outcomes.insert((soup, applied));
            continue;
        }
        for inst in &enabled {
            let next = apply_instance(mdef, &soup, inst, identity);
            let mut labels = applied.clone();
            labels.insert(mdef.rules[inst.rule].label.clone());
            let state = (next, labels);
            if !seen.contains(&state) {
                seen.insert(state.clone());
                stack.push(state);
            }
        }
    }
    outcomes.into_iter().collect()
}
