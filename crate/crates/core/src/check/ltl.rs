//! LTL: tableau translation of the negated formula into a generalized
//! Büchi automaton, then a nested depth-first search of the product.

use std::collections::{BTreeSet, HashMap, HashSet};

use fixedbitset::FixedBitSet;

use super::graph::Kripke;
use crate::lang::{Formula, Prop};

/// Negation normal form over indexed atoms. Children are arena ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Nnf {
    True,
    False,
    Lit(usize, bool),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    Until(usize, usize),
    Release(usize, usize),
}

#[derive(Default)]
struct Arena {
    nodes: Vec<Nnf>,
    ids: HashMap<Nnf, usize>,
    props: Vec<Prop>,
}

impl Arena {
    fn intern(&mut self, n: Nnf) -> usize {
        if let Some(&i) = self.ids.get(&n) {
            return i;
        }
        self.nodes.push(n);
        self.ids.insert(n, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn atom(&mut self, p: &Prop) -> usize {
        match self.props.iter().position(|q| q == p) {
            Some(i) => i,
            None => {
                self.props.push(p.clone());
                self.props.len() - 1
            }
        }
    }

    fn nnf(&mut self, f: &Formula, neg: bool) -> Result<usize, String> {
        use Formula as F;
        let n = match (f, neg) {
            (F::True, false) | (F::False, true) => Nnf::True,
            (F::True, true) | (F::False, false) => Nnf::False,
            (F::Prop(p), _) => Nnf::Lit(self.atom(p), !neg),
            (F::Not(a), _) => return self.nnf(a, !neg),
            (F::And(a, b), false) | (F::Or(a, b), true) => Nnf::And(self.nnf(a, neg)?, self.nnf(b, neg)?),
            (F::Or(a, b), false) | (F::And(a, b), true) => Nnf::Or(self.nnf(a, neg)?, self.nnf(b, neg)?),
            (F::Implies(a, b), false) => Nnf::Or(self.nnf(a, true)?, self.nnf(b, false)?),
            (F::Implies(a, b), true) => Nnf::And(self.nnf(a, false)?, self.nnf(b, true)?),
            (F::Next(a), _) => Nnf::Next(self.nnf(a, neg)?),
            (F::Until(a, b), false) => Nnf::Until(self.nnf(a, false)?, self.nnf(b, false)?),
            (F::Until(a, b), true) => Nnf::Release(self.nnf(a, true)?, self.nnf(b, true)?),
            (F::Eventually(a), false) | (F::Always(a), true) => {
                let t = self.intern(Nnf::True);
                Nnf::Until(t, self.nnf(a, neg)?)
            }
            (F::Always(a), false) | (F::Eventually(a), true) => {
                let f = self.intern(Nnf::False);
                Nnf::Release(f, self.nnf(a, neg)?)
            }
            (other, _) => return Err(format!("not an LTL formula: {other}")),
        };
        Ok(self.intern(n))
    }
}

/// Automaton over state valuations. A run reads the valuation of each
/// visited state; state `q` can be entered only where its literals hold.
#[derive(Clone, Debug)]
pub struct BuchiAutomaton {
    pub props: Vec<Prop>,
    /// Literals `(atom, polarity)` required when entering each state.
    pub literals: Vec<Vec<(usize, bool)>>,
    pub initial: Vec<usize>,
    pub succ: Vec<Vec<usize>>,
    /// Generalized acceptance: a run must meet each set infinitely often.
    /// At least one set is always present.
    pub accepting: Vec<FixedBitSet>,
}

impl BuchiAutomaton {
    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    fn enters(&self, q: usize, val: &dyn Fn(usize) -> bool) -> bool {
        self.literals[q].iter().all(|&(a, pos)| val(a) == pos)
    }
}

const INIT: usize = usize::MAX;

struct Node {
    incoming: BTreeSet<usize>,
    old: BTreeSet<usize>,
    next: BTreeSet<usize>,
}

struct Tableau<'a> {
    arena: &'a Arena,
    nodes: Vec<Node>,
}

impl Tableau<'_> {
    fn contradicts(&self, old: &BTreeSet<usize>, n: Nnf) -> bool {
        match n {
            Nnf::False => true,
            Nnf::Lit(a, pos) => old.iter().any(|&o| self.arena.nodes[o] == Nnf::Lit(a, !pos)),
            _ => false,
        }
    }

    fn expand(&mut self, incoming: BTreeSet<usize>, mut new: Vec<usize>, mut old: BTreeSet<usize>, next: BTreeSet<usize>) {
        let Some(eta) = new.pop() else {
            if let Some(n) = self.nodes.iter_mut().find(|n| n.old == old && n.next == next) {
                n.incoming.extend(incoming);
                return;
            }
            let id = self.nodes.len();
            let new: Vec<usize> = next.iter().copied().collect();
            self.nodes.push(Node { incoming, old, next });
            self.expand([id].into(), new, BTreeSet::new(), BTreeSet::new());
            return;
        };
        if old.contains(&eta) {
            return self.expand(incoming, new, old, next);
        }
        let n = self.arena.nodes[eta];
        match n {
            Nnf::True | Nnf::False | Nnf::Lit(..) => {
                if self.contradicts(&old, n) {
                    return;
                }
                old.insert(eta);
                self.expand(incoming, new, old, next)
            }
            Nnf::And(a, b) => {
                old.insert(eta);
                new.extend([a, b].into_iter().filter(|x| !old.contains(x)));
                self.expand(incoming, new, old, next)
            }
            Nnf::Next(a) => {
                old.insert(eta);
                let mut next = next;
                next.insert(a);
                self.expand(incoming, new, old, next)
            }
            Nnf::Or(a, b) | Nnf::Until(a, b) | Nnf::Release(a, b) => {
                old.insert(eta);
                let (first_new, first_next, second_new): (Vec<usize>, Option<usize>, Vec<usize>) = match n {
                    Nnf::Or(..) => (vec![a], None, vec![b]),
                    Nnf::Until(..) => (vec![a], Some(eta), vec![b]),
                    _ => (vec![b], Some(eta), vec![a, b]),
                };
                let mut n1 = new.clone();
                n1.extend(first_new.into_iter().filter(|x| !old.contains(x)));
                let mut x1 = next.clone();
                x1.extend(first_next);
                self.expand(incoming.clone(), n1, old.clone(), x1);
                let mut n2 = new;
                n2.extend(second_new.into_iter().filter(|x| !old.contains(x)));
                self.expand(incoming, n2, old, next)
            }
        }
    }
}

/// Automaton accepting exactly the infinite valuation sequences that
/// violate `phi`.
pub fn ltl_to_buchi(phi: &Formula) -> Result<BuchiAutomaton, String> {
    let mut arena = Arena::default();
    let root = arena.nnf(phi, true)?;
    let mut t = Tableau { arena: &arena, nodes: Vec::new() };
    t.expand([INIT].into(), vec![root], BTreeSet::new(), BTreeSet::new());
    let nodes = t.nodes;
    let n = nodes.len();

    let mut succ = vec![Vec::new(); n];
    let mut initial = Vec::new();
    for (q, node) in nodes.iter().enumerate() {
        for &p in &node.incoming {
            if p == INIT {
                initial.push(q);
            } else {
                succ[p].push(q);
            }
        }
    }
    let literals = nodes
        .iter()
        .map(|node| {
            node.old
                .iter()
                .filter_map(|&o| match arena.nodes[o] {
                    Nnf::Lit(a, pos) => Some((a, pos)),
                    _ => None,
                })
                .collect()
        })
        .collect();
    let untils: Vec<(usize, usize)> = arena
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(i, x)| match x {
            Nnf::Until(_, b) => Some((i, *b)),
            _ => None,
        })
        .collect();
    let mut accepting: Vec<FixedBitSet> = untils
        .iter()
        .map(|&(u, b)| {
            let mut set = FixedBitSet::with_capacity(n);
            for (q, node) in nodes.iter().enumerate() {
                if !node.old.contains(&u) || node.old.contains(&b) {
                    set.insert(q);
                }
            }
            set
        })
        .collect();
    if accepting.is_empty() {
        let mut all = FixedBitSet::with_capacity(n);
        all.insert_range(..);
        accepting.push(all);
    }
    Ok(BuchiAutomaton { props: arena.props, literals, initial, succ, accepting })
}

/// Product state: structure state, automaton state, acceptance counter.
type PState = (usize, usize, usize);

/// Searches for a path of `k` accepted by `aut`. Returns the lasso as
/// structure states `(prefix, cycle)`; the cycle's last state steps back
/// to its first.
pub fn find_lasso<K: Kripke>(k: &K, aut: &BuchiAutomaton) -> Option<(Vec<usize>, Vec<usize>)> {
    let nsets = aut.accepting.len();
    let mut vals: HashMap<usize, FixedBitSet> = HashMap::new();
    let mut val_of = |s: usize| -> FixedBitSet {
        vals.entry(s)
            .or_insert_with(|| {
                let mut b = FixedBitSet::with_capacity(aut.props.len());
                for (i, p) in aut.props.iter().enumerate() {
                    b.set(i, k.holds(p, s));
                }
                b
            })
            .clone()
    };
    let mut succs = |(g, q, i): PState| -> Vec<PState> {
        let j = if aut.accepting[i].contains(q) { (i + 1) % nsets } else { i };
        let mut out = Vec::new();
        let gs: Vec<usize> = k.successors(g).collect();
        for g2 in gs {
            let v = val_of(g2);
            for &q2 in &aut.succ[q] {
                if aut.enters(q2, &|a| v.contains(a)) {
                    out.push((g2, q2, j));
                }
            }
        }
        out
    };
    let accepting = |(_, q, i): PState| i == 0 && aut.accepting[0].contains(q);

    let g0 = k.initial();
    let v0 = {
        let mut b = FixedBitSet::with_capacity(aut.props.len());
        for (i, p) in aut.props.iter().enumerate() {
            b.set(i, k.holds(p, g0));
        }
        b
    };
    let roots: Vec<PState> = aut
        .initial
        .iter()
        .filter(|&&q| aut.enters(q, &|a| v0.contains(a)))
        .map(|&q| (g0, q, 0))
        .collect();

    let mut blue: HashSet<PState> = HashSet::new();
    let mut red: HashSet<PState> = HashSet::new();
    for root in roots {
        if blue.contains(&root) {
            continue;
        }
        blue.insert(root);
        let mut stack: Vec<(PState, Vec<PState>, usize)> = vec![(root, succs(root), 0)];
        let mut on_stack: HashMap<PState, usize> = HashMap::from([(root, 0)]);
        while let Some(top) = stack.last_mut() {
            if top.2 < top.1.len() {
                let t = top.1[top.2];
                top.2 += 1;
                if blue.insert(t) {
                    on_stack.insert(t, stack.len());
                    let ts = succs(t);
                    stack.push((t, ts, 0));
                }
                continue;
            }
            let seed = top.0;
            if accepting(seed) {
                if let Some((red_path, hit)) = red_search(seed, &mut succs, &on_stack, &mut red) {
                    let j = on_stack[&hit];
                    let blue_path: Vec<usize> = stack.iter().map(|e| e.0 .0).collect();
                    let prefix = blue_path[..j].to_vec();
                    let mut cycle = blue_path[j..].to_vec();
                    cycle.extend(red_path.iter().map(|p| p.0));
                    return Some((prefix, cycle));
                }
            }
            on_stack.remove(&seed);
            stack.pop();
        }
    }
    None
}

/// Red search from `seed` for a state on the blue stack. Returns the path
/// after `seed` up to, not including, the hit state.
fn red_search(
    seed: PState,
    succs: &mut impl FnMut(PState) -> Vec<PState>,
    on_stack: &HashMap<PState, usize>,
    red: &mut HashSet<PState>,
) -> Option<(Vec<PState>, PState)> {
    let mut stack: Vec<(PState, Vec<PState>, usize)> = vec![(seed, succs(seed), 0)];
    while let Some(top) = stack.last_mut() {
        if top.2 < top.1.len() {
            let t = top.1[top.2];
            top.2 += 1;
            if on_stack.contains_key(&t) {
                let path = stack[1..].iter().map(|e| e.0).collect();
                return Some((path, t));
            }
            if red.insert(t) {
                let ts = succs(t);
                stack.push((t, ts, 0));
            }
            continue;
        }
        stack.pop();
    }
    None
}

/// Shortest equivalent presentation: the cycle is reduced to its primitive
/// period and rolled back into the prefix as far as possible.
pub(crate) fn normalize_lasso(mut prefix: Vec<usize>, mut cycle: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
    let k = cycle.len();
    if let Some(p) = (1..=k).find(|&p| k.is_multiple_of(p) && (p..k).all(|i| cycle[i] == cycle[i - p])) {
        cycle.truncate(p);
    }
    while let (Some(&last), Some(&c)) = (prefix.last(), cycle.last()) {
        if last != c {
            break;
        }
        prefix.pop();
        cycle.rotate_right(1);
    }
    (prefix, cycle)
}
