//! Helpers shared by the integration tests: model loading and a random
//! generator of small ground systems with a brute-force step oracle.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use membranes::lang::{parse_configuration, parse_spec, PriorityMode, SystemSpec};
use membranes::model::{AppliedMultiset, Configuration, Label, MembraneName, Multiset};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn model_path(name: &str) -> String {
    format!("{}/models/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn load(name: &str) -> SystemSpec {
    let text = std::fs::read_to_string(model_path(name)).unwrap();
    parse_spec(&text).unwrap_or_else(|e| panic!("{name}: {e:?}"))
}

pub fn config(spec: &SystemSpec, text: &str) -> Configuration {
    parse_configuration(text, spec).unwrap_or_else(|e| panic!("{text}: {e:?}"))
}

type Bag = BTreeMap<String, usize>;

fn bag_add(b: &mut Bag, o: &str, n: usize) {
    if n > 0 {
        *b.entry(o.to_string()).or_default() += n;
    }
}

fn bag_text(b: &Bag) -> String {
    let v: Vec<&str> = b.iter().flat_map(|(o, n)| std::iter::repeat_n(o.as_str(), *n)).collect();
    if v.is_empty() {
        "empty".into()
    } else {
        v.join(" ")
    }
}

#[derive(Clone, Debug, Default)]
pub struct GroundRule {
    pub label: String,
    pub lhs: Bag,
    pub here: Vec<String>,
    pub out: Vec<String>,
    pub into: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct GroundMembrane {
    pub name: String,
    pub rules: Vec<GroundRule>,
    /// (higher, lower) generator pairs, by rule index.
    pub pairs: Vec<(usize, usize)>,
    pub objects: Bag,
}

/// A skin `M1` with an optional child `M2`; rules are ground.
#[derive(Clone, Debug)]
pub struct GroundSystem {
    pub skin: GroundMembrane,
    pub inner: Option<GroundMembrane>,
}

const ALPHABET: [&str; 4] = ["a", "b", "c", "d"];

fn random_rule(rng: &mut impl Rng, label: String, can_in: bool, can_dissolve: bool) -> GroundRule {
    let mut r = GroundRule { label, ..GroundRule::default() };
    for _ in 0..rng.gen_range(1..=2) {
        bag_add(&mut r.lhs, ALPHABET.choose(rng).unwrap(), 1);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let o = ALPHABET.choose(rng).unwrap().to_string();
        match rng.gen_range(0..if can_in { 3 } else { 2 }) {
            0 => r.here.push(o),
            1 => r.out.push(o),
            _ => r.into.push(o),
        }
    }
    if can_dissolve && rng.gen_bool(0.2) {
        r.here.push("delta".into());
    }
    r
}

fn random_membrane(rng: &mut impl Rng, name: &str, prefix: &str, can_in: bool, inner: bool) -> GroundMembrane {
    let n = rng.gen_range(1..=4);
    let rules: Vec<GroundRule> =
        (0..n).map(|i| random_rule(rng, format!("{prefix}{}", i + 1), can_in, inner)).collect();
    let mut pairs = BTreeSet::new();
    if n > 1 {
        for _ in 0..rng.gen_range(0..=3) {
            let i = rng.gen_range(0..n - 1);
            let j = rng.gen_range(i + 1..n);
            pairs.insert((i, j));
        }
    }
    GroundMembrane { name: name.into(), rules, pairs: pairs.into_iter().collect(), objects: Bag::new() }
}

pub fn random_system(rng: &mut impl Rng) -> GroundSystem {
    let nested = rng.gen_bool(0.6);
    let mut skin = random_membrane(rng, "M1", "p", nested, false);
    let mut inner = nested.then(|| random_membrane(rng, "M2", "q", false, true));
    let total = rng.gen_range(1..=8);
    for _ in 0..total {
        let o = ALPHABET.choose(rng).unwrap();
        match inner.as_mut() {
            Some(m) if rng.gen_bool(0.5) => bag_add(&mut m.objects, o, 1),
            _ => bag_add(&mut skin.objects, o, 1),
        }
    }
    GroundSystem { skin, inner }
}

impl GroundRule {
    fn text(&self) -> String {
        let mut rhs = self.here.join(" ");
        for (objs, target) in [(&self.out, "out"), (&self.into, "in M2")] {
            if !objs.is_empty() {
                rhs.push_str(&format!(" ({}, {target})", objs.join(" ")));
            }
        }
        let rhs = if rhs.trim().is_empty() { "empty".to_string() } else { rhs };
        let lhs: Bag = self.lhs.clone();
        format!("  ev {} : {} -> {} .\n", self.label, bag_text(&lhs), rhs.trim())
    }
}

impl GroundMembrane {
    fn text(&self) -> String {
        let mut s = format!("membrane {} is\n", self.name);
        for r in &self.rules {
            s.push_str(&r.text());
        }
        for (h, l) in &self.pairs {
            s.push_str(&format!("  pr {} > {} .\n", self.rules[*h].label, self.rules[*l].label));
        }
        s + "end\n"
    }

    /// Transitive closure as (higher, lower) index pairs.
    fn closure(&self) -> BTreeSet<(usize, usize)> {
        let mut c: BTreeSet<(usize, usize)> = self.pairs.iter().copied().collect();
        loop {
            let extra: Vec<(usize, usize)> = c
                .iter()
                .flat_map(|&(a, b)| c.iter().filter(move |&&(x, _)| x == b).map(move |&(_, d)| (a, d)))
                .filter(|p| !c.contains(p))
                .collect();
            if extra.is_empty() {
                return c;
            }
            c.extend(extra);
        }
    }

    fn can_apply(&self, choice: &[usize]) -> bool {
        let mut need = Bag::new();
        for (r, &k) in self.rules.iter().zip(choice) {
            for (o, n) in &r.lhs {
                bag_add(&mut need, o, n * k);
            }
        }
        need.iter().all(|(o, n)| self.objects.get(o).copied().unwrap_or(0) >= *n)
    }

    fn weak_admissible(&self, a: &[usize], rel: &BTreeSet<(usize, usize)>) -> bool {
        (0..self.rules.len()).all(|r| {
            let lower: Vec<usize> = rel.iter().filter(|p| p.0 == r).map(|p| p.1).collect();
            if lower.iter().all(|&l| a[l] == 0) {
                return true;
            }
            let mut b = a.to_vec();
            lower.iter().for_each(|&l| b[l] = 0);
            b[r] += 1;
            !self.can_apply(&b)
        })
    }

    fn strong_admissible(&self, a: &[usize], rel: &BTreeSet<(usize, usize)>) -> bool {
        self.weak_admissible(a, rel) && rel.iter().all(|&(h, l)| a[h] == 0 || a[l] == 0)
    }

    /// Every rule multiset that is applicable, admissible in `mode` and
    /// maximal. Without priorities and in the weak sense maximality is the
    /// literal one; in the strong sense it is taken among strongly
    /// admissible choices, since a literally maximal one may not exist.
    pub fn choices(&self, mode: PriorityMode) -> Vec<Vec<usize>> {
        let rel = self.closure();
        let mut all = Vec::new();
        let mut cur = vec![0; self.rules.len()];
        self.enumerate(0, &mut cur, &mut all);
        let bump = |a: &[usize], r: usize| {
            let mut b = a.to_vec();
            b[r] += 1;
            b
        };
        all.into_iter()
            .filter(|a| match mode {
                PriorityMode::Ignore => (0..a.len()).all(|r| !self.can_apply(&bump(a, r))),
                PriorityMode::Weak => {
                    self.weak_admissible(a, &rel) && (0..a.len()).all(|r| !self.can_apply(&bump(a, r)))
                }
                PriorityMode::Strong => {
                    self.strong_admissible(a, &rel)
                        && (0..a.len()).all(|r| {
                            let b = bump(a, r);
                            !self.can_apply(&b) || !self.strong_admissible(&b, &rel)
                        })
                }
            })
            .collect()
    }

    fn enumerate(&self, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == self.rules.len() {
            out.push(cur.clone());
            return;
        }
        loop {
            self.enumerate(i + 1, cur, out);
            cur[i] += 1;
            if !self.can_apply(cur) {
                cur[i] = 0;
                return;
            }
        }
    }

    fn labels(&self, a: &[usize]) -> Multiset<Label> {
        let mut m = Multiset::new();
        for (r, &k) in self.rules.iter().zip(a) {
            m.insert_n(Label::new(&r.label), k);
        }
        m
    }

    /// Remaining objects after removing the left-hand sides of `a`.
    fn rest(&self, a: &[usize]) -> Bag {
        let mut b = self.objects.clone();
        for (r, &k) in self.rules.iter().zip(a) {
            for (o, n) in r.lhs.iter().filter(|_| k > 0) {
                *b.get_mut(o).unwrap() -= n * k;
            }
        }
        b.retain(|_, n| *n > 0);
        b
    }

    fn products(&self, a: &[usize], part: fn(&GroundRule) -> &Vec<String>) -> Bag {
        let mut b = Bag::new();
        for (r, &k) in self.rules.iter().zip(a) {
            for o in part(r) {
                bag_add(&mut b, o, k);
            }
        }
        b
    }
}

impl GroundSystem {
    pub fn spec_text(&self) -> String {
        let mut s = self.skin.text();
        if let Some(m) = &self.inner {
            s.push_str(&m.text());
        }
        s
    }

    pub fn spec(&self) -> SystemSpec {
        parse_spec(&self.spec_text()).unwrap_or_else(|e| panic!("{e:?}\n{}", self.spec_text()))
    }

    pub fn config_text(&self) -> String {
        match &self.inner {
            Some(m) => format!(
                "< M1 | {} < M2 | {} > >",
                bag_text(&self.skin.objects),
                bag_text(&m.objects)
            ),
            None => format!("< M1 | {} >", bag_text(&self.skin.objects)),
        }
    }

    /// Successors computed from the definitions: every combination of
    /// admissible maximal choices, applied at once, then delivery and
    /// dissolution done by hand.
    pub fn oracle(&self, mode: PriorityMode) -> BTreeSet<(Configuration, AppliedMultiset)> {
        let spec = self.spec();
        let inner_choices = match &self.inner {
            Some(m) => m.choices(mode).into_iter().map(Some).collect(),
            None => vec![None],
        };
        let mut out = BTreeSet::new();
        for a1 in self.skin.choices(mode) {
            for a2 in &inner_choices {
                let mut applied = AppliedMultiset::new();
                applied.add(&MembraneName::new("M1"), &self.skin.labels(&a1));
                let mut top = self.skin.products(&a1, |r| &r.out);
                let mut w1 = self.skin.rest(&a1);
                self.skin.products(&a1, |r| &r.here).iter().for_each(|(o, n)| bag_add(&mut w1, o, *n));
                let mut text = String::new();
                if let (Some(m), Some(a2)) = (&self.inner, a2) {
                    applied.add(&MembraneName::new("M2"), &m.labels(a2));
                    let mut w2 = m.rest(a2);
                    for part in [m.products(a2, |r| &r.here), self.skin.products(&a1, |r| &r.into)] {
                        part.iter().for_each(|(o, n)| bag_add(&mut w2, o, *n));
                    }
                    m.products(a2, |r| &r.out).iter().for_each(|(o, n)| bag_add(&mut w1, o, *n));
                    if let Some(d) = w2.get_mut("delta") {
                        *d -= 1;
                        w2.iter().for_each(|(o, n)| bag_add(&mut w1, o, *n));
                    } else {
                        text = format!(" < M2 | {} >", bag_text(&w2));
                    }
                }
                if applied.is_empty() {
                    continue;
                }
                top.retain(|_, n| *n > 0);
                let prefix = if top.is_empty() { String::new() } else { bag_text(&top) + " " };
                let full = format!("{prefix}< M1 | {}{text} >", bag_text(&w1));
                out.insert((config(&spec, &full), applied));
            }
        }
        out
    }
}
