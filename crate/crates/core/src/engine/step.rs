//! A full evolution step: rules in every membrane, then communication,
//! division and dissolution.

use std::collections::{BTreeSet, HashMap};

use super::membrane::{membrane_max_parallel, Outcome};
use crate::lang::{PriorityMode, PriorityRelation, SystemSpec};
use crate::model::{
    AppliedMultiset, Configuration, Membrane, MembraneName, Multiset, Object, Soup, Symbol, Target,
    TargetMessage,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepResult {
    pub config: Configuration,
    pub applied: AppliedMultiset,
}

/// A specification prepared for stepping in a fixed priority mode.
pub struct Engine<'s> {
    spec: &'s SystemSpec,
    mode: PriorityMode,
    priorities: HashMap<MembraneName, PriorityRelation>,
    identity: Option<Symbol>,
}

type Cache = HashMap<(MembraneName, Multiset<Object>), Vec<Outcome>>;

impl<'s> Engine<'s> {
    pub fn new(spec: &'s SystemSpec, mode: PriorityMode) -> Self {
        let priorities = spec
            .membranes
            .iter()
            .map(|m| (m.name.clone(), m.priority_closure()))
            .collect();
        Engine {
            spec,
            mode,
            priorities,
            identity: spec.signature.seq_identity().cloned(),
        }
    }

    pub fn spec(&self) -> &'s SystemSpec {
        self.spec
    }

    pub fn mode(&self) -> PriorityMode {
        self.mode
    }

    /// All successors of `config`, deduplicated and ordered by applied
    /// rules, then by configuration. Empty when the
    /// configuration is irreducible.
    pub fn step(&self, config: &Configuration) -> Vec<StepResult> {
        let mut cache = Cache::new();
        let mut results = BTreeSet::new();
        for (soup, applied) in self.rules_phase(config, &mut cache) {
            if applied.is_empty() {
                continue;
            }
            for c in communicate(&soup) {
                let c = apply_dissolutions(&apply_divisions(&c));
                results.insert(StepResult {
                    config: c,
                    applied: applied.clone(),
                });
            }
        }
        let mut results: Vec<StepResult> = results.into_iter().collect();
        results.sort_by_cached_key(|r| (label_key(&r.applied), r.config.clone()));
        results
    }

    /// Phase one over the whole configuration: every combination of
    /// per-membrane outcomes.
    fn rules_phase(&self, config: &Configuration, cache: &mut Cache) -> Vec<(Soup, AppliedMultiset)> {
        self.children_options(config.membranes(), cache)
            .into_iter()
            .map(|(kids, applied)| {
                (
                    Soup::from_parts(config.objects().clone(), config.messages().to_vec(), kids),
                    applied,
                )
            })
            .collect()
    }

    fn membrane_options(&self, m: &Membrane, cache: &mut Cache) -> Vec<(Membrane, AppliedMultiset)> {
        let key = (m.name.clone(), m.contents.objects().clone());
        let own = match cache.get(&key) {
            Some(o) => o.clone(),
            None => {
                let o = match (self.spec.membrane(&m.name), self.priorities.get(&m.name)) {
                    (Some(mdef), Some(rel)) => membrane_max_parallel(
                        mdef,
                        m.contents.objects(),
                        self.mode,
                        rel,
                        self.identity.as_ref(),
                    ),
                    _ => vec![(Soup::from_objects(m.contents.objects().clone()), Multiset::new())],
                };
                cache.insert(key, o.clone());
                o
            }
        };
        let kids = self.children_options(m.contents.membranes(), cache);
        let mut out = Vec::with_capacity(own.len() * kids.len());
        for (soup, labels) in &own {
            for (children, applied) in &kids {
                let mut messages = m.contents.messages().to_vec();
                messages.extend(soup.messages().iter().cloned());
                let contents = Soup::from_parts(soup.objects().clone(), messages, children.clone());
                let mut applied = applied.clone();
                applied.add(&m.name, labels);
                out.push((Membrane::new(m.name.clone(), contents), applied));
            }
        }
        out
    }

    /// Options for a list of sibling membranes. Identical siblings are
    /// treated as a group whose options are multisets of single options.
    fn children_options(&self, membranes: &[Membrane], cache: &mut Cache) -> Vec<(Vec<Membrane>, AppliedMultiset)> {
        let mut acc: Vec<(Vec<Membrane>, AppliedMultiset)> = vec![(Vec::new(), AppliedMultiset::new())];
        let mut i = 0;
        while i < membranes.len() {
            let mut j = i + 1;
            while j < membranes.len() && membranes[j] == membranes[i] {
                j += 1;
            }
            let single = self.membrane_options(&membranes[i], cache);
            let group = multichoose(&single, j - i);
            let mut next = BTreeSet::new();
            for (ms, ap) in &acc {
                for (gms, gap) in &group {
                    let mut ms = ms.clone();
                    ms.extend(gms.iter().cloned());
                    ms.sort();
                    let mut ap = ap.clone();
                    ap.merge(gap);
                    next.insert((ms, ap));
                }
            }
            acc = next.into_iter().collect();
            i = j;
        }
        acc
    }
}

/// Orders label multisets as their printed label sequences.
fn label_key(a: &AppliedMultiset) -> Vec<(MembraneName, Vec<crate::model::Label>)> {
    a.iter()
        .map(|(m, ls)| (m.clone(), ls.iter_expanded().cloned().collect()))
        .collect()
}

/// All multisets of size `k` over `options`, merged.
fn multichoose(options: &[(Membrane, AppliedMultiset)], k: usize) -> Vec<(Vec<Membrane>, AppliedMultiset)> {
    fn go(
        options: &[(Membrane, AppliedMultiset)],
        from: usize,
        k: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<(Vec<Membrane>, AppliedMultiset)>,
    ) {
        if cur.len() == k {
            let mut ms = Vec::with_capacity(k);
            let mut ap = AppliedMultiset::new();
            for &i in cur.iter() {
                ms.push(options[i].0.clone());
                ap.merge(&options[i].1);
            }
            out.push((ms, ap));
            return;
        }
        for i in from..options.len() {
            cur.push(i);
            go(options, i, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(options, 0, k, &mut Vec::new(), &mut out);
    out
}

/// Convenience wrapper around [`Engine::step`].
pub fn evolution_step(config: &Configuration, spec: &SystemSpec, mode: PriorityMode) -> Vec<StepResult> {
    Engine::new(spec, mode).step(config)
}

// ---------------------------------------------------------------------------
// Communication

/// Delivers every directed message. `in N` with several children named `N`
/// yields one outcome per choice; with none, the branch is dropped. `out`
/// from the skin lands in the top-level soup; `out` at the top level has
/// nowhere to go and also drops the branch.
pub fn communicate(config: &Configuration) -> Vec<Configuration> {
    comm_soup(config)
        .into_iter()
        .filter_map(|(soup, out)| {
            if out.is_empty() {
                Some(soup)
            } else {
                log::info!("dead letter: ({out_s}, out) at the top level", out_s = fmt_ms(&out));
                None
            }
        })
        .collect()
}

fn fmt_ms(m: &Multiset<Object>) -> String {
    Soup::from_objects(m.clone()).to_string()
}

/// Returns the delivered soup together with the objects it sends out.
fn comm_soup(soup: &Soup) -> Vec<(Soup, Multiset<Object>)> {
    // Children first; their outputs land among our objects.
    let mut kid_opts: Vec<(Vec<Membrane>, Multiset<Object>)> = vec![(Vec::new(), Multiset::new())];
    for m in soup.membranes() {
        let mine = comm_soup(&m.contents);
        let mut next = Vec::with_capacity(kid_opts.len() * mine.len());
        for (ms, up) in &kid_opts {
            for (c, o) in &mine {
                let mut ms = ms.clone();
                ms.push(Membrane::new(m.name.clone(), c.clone()));
                next.push((ms, up.sum(o)));
            }
        }
        kid_opts = next;
    }

    let mut here = soup.objects().clone();
    let mut out = Multiset::new();
    let mut inward = Vec::new();
    let mut divisions = Vec::new();
    for msg in soup.messages() {
        match msg {
            TargetMessage::Directed { payload, target } => match target {
                Target::Here => here.add_all(payload),
                Target::Out => out.add_all(payload),
                Target::In(n) => inward.push((n, payload)),
            },
            d @ TargetMessage::Division { .. } => divisions.push(d.clone()),
        }
    }

    let mut results = BTreeSet::new();
    for (kids, up) in kid_opts {
        let mut objects = here.clone();
        objects.add_all(&up);
        let mut branches = vec![kids];
        for (name, payload) in &inward {
            let mut next = Vec::new();
            for b in &branches {
                let targets: Vec<usize> = (0..b.len()).filter(|&i| &b[i].name == *name).collect();
                if targets.is_empty() {
                    log::info!("dead letter: ({}, in {name}) has no child {name}", fmt_ms(payload));
                }
                for i in targets {
                    let mut b = b.clone();
                    let c = &b[i].contents;
                    let mut objs = c.objects().clone();
                    objs.add_all(payload);
                    b[i].contents = Soup::from_parts(objs, c.messages().to_vec(), c.membranes().to_vec());
                    b.sort();
                    next.push(b);
                }
            }
            branches = next;
        }
        for b in branches {
            results.insert((Soup::from_parts(objects.clone(), divisions.clone(), b), out.clone()));
        }
    }
    results.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Division and dissolution

/// Splits every non-skin membrane holding division messages. A membrane
/// with `k` such messages becomes `2^k` copies.
pub fn apply_divisions(config: &Configuration) -> Configuration {
    Soup::from_parts(
        config.objects().clone(),
        config.messages().to_vec(),
        divide_all(config.membranes(), false),
    )
}

fn divide_all(membranes: &[Membrane], divisible: bool) -> Vec<Membrane> {
    let mut out = Vec::new();
    for m in membranes {
        let kids = divide_all(m.contents.membranes(), true);
        let (divs, rest): (Vec<&TargetMessage>, Vec<&TargetMessage>) = m
            .contents
            .messages()
            .iter()
            .partition(|msg| matches!(msg, TargetMessage::Division { .. }));
        if !divisible || divs.is_empty() {
            let c = &m.contents;
            out.push(Membrane::new(
                m.name.clone(),
                Soup::from_parts(c.objects().clone(), c.messages().to_vec(), kids),
            ));
            continue;
        }
        let rest: Vec<TargetMessage> = rest.into_iter().cloned().collect();
        let mut variants = vec![m.contents.objects().clone()];
        for d in divs {
            let TargetMessage::Division { left, right } = d else { unreachable!() };
            variants = variants
                .into_iter()
                .flat_map(|v| [v.sum(left), v.sum(right)])
                .collect();
        }
        for objs in variants {
            out.push(Membrane::new(
                m.name.clone(),
                Soup::from_parts(objs, rest.clone(), kids.clone()),
            ));
        }
    }
    out
}

/// Dissolves every non-skin membrane containing `delta`. One `delta` is
/// consumed; the rest of the contents spill into the parent.
pub fn apply_dissolutions(config: &Configuration) -> Configuration {
    dissolve(config, false)
}

fn dissolve(soup: &Soup, children_dissolvable: bool) -> Soup {
    let mut objects = soup.objects().clone();
    let mut messages = soup.messages().to_vec();
    let mut membranes = Vec::new();
    let delta = Object::delta();
    for m in soup.membranes() {
        let inner = dissolve(&m.contents, true);
        if children_dissolvable && inner.objects().count(&delta) > 0 {
            let (mut objs, msgs, kids) = inner.into_parts();
            objs.remove(&delta);
            objects.add_all(&objs);
            messages.extend(msgs);
            membranes.extend(kids);
        } else {
            membranes.push(Membrane::new(m.name.clone(), inner));
        }
    }
    Soup::from_parts(objects, messages, membranes)
}
