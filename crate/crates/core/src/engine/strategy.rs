//! Strategy expressions that realise rule priorities with `or-else`
//! lattices. These are shown to the user; the engine itself enforces
//! priorities directly.

use std::collections::HashMap;
use std::fmt;

use crate::lang::MembraneDef;
use crate::model::{Label, MembraneName};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StratExpr {
    Fail,
    Idle,
    Rule(Label),
    /// `r ; mpr-strong(M, ('r, AR))`
    Strong(Label),
    /// `match H s.t. intersection(higher, AR) = empty ; <strong r>`
    Guarded(Vec<Label>, Label),
    Disj(Vec<StratExpr>),
    OrElse(Box<StratExpr>, Box<StratExpr>),
}

impl StratExpr {
    fn or_else(a: StratExpr, b: StratExpr) -> StratExpr {
        StratExpr::OrElse(Box::new(a), Box::new(b))
    }

    fn disj(mut xs: Vec<StratExpr>) -> StratExpr {
        match xs.len() {
            0 => StratExpr::Fail,
            1 => xs.pop().unwrap(),
            _ => StratExpr::Disj(xs),
        }
    }

    /// The weak-priority lattice for `rules` under generator pairs
    /// `(higher, lower)`.
    pub fn weak(rules: &[Label], pairs: &[(Label, Label)]) -> StratExpr {
        let order: HashMap<&Label, usize> = rules.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let preds = |r: &Label| -> Vec<Label> {
            let mut p: Vec<Label> = pairs.iter().filter(|(_, lo)| lo == r).map(|(hi, _)| hi.clone()).collect();
            p.sort_by_key(|l| order.get(l).copied().unwrap_or(usize::MAX));
            p.dedup();
            p
        };
        let minimal: Vec<StratExpr> = rules
            .iter()
            .filter(|r| !pairs.iter().any(|(hi, _)| hi == *r))
            .map(|r| StratExpr::Rule(r.clone()))
            .collect();
        let mut s = simplify(StratExpr::disj(minimal), &order);
        loop {
            let next = simplify(extend(&s, &preds), &order);
            if next == s {
                return s;
            }
            s = next;
        }
    }

    fn level(&self) -> u8 {
        match self {
            StratExpr::OrElse(..) => 0,
            StratExpr::Disj(_) => 1,
            StratExpr::Strong(_) | StratExpr::Guarded(..) => 2,
            _ => 3,
        }
    }

    /// Rightmost label, used to order disjuncts.
    fn key_label(&self) -> Option<&Label> {
        match self {
            StratExpr::Rule(l) | StratExpr::Strong(l) | StratExpr::Guarded(_, l) => Some(l),
            StratExpr::OrElse(_, b) => b.key_label(),
            StratExpr::Disj(xs) => xs.first().and_then(|x| x.key_label()),
            _ => None,
        }
    }

    /// Turns a weak lattice into the strong one: every rule becomes a
    /// recursive call, guarded when it has predecessors.
    fn strengthen(&self, closure: &dyn Fn(&Label) -> Vec<Label>) -> StratExpr {
        match self {
            StratExpr::Rule(r) => StratExpr::Strong(r.clone()),
            StratExpr::Disj(xs) => StratExpr::Disj(xs.iter().map(|x| x.strengthen(closure)).collect()),
            StratExpr::OrElse(a, b) => {
                let rhs = match &**b {
                    StratExpr::Rule(r) => StratExpr::Guarded(closure(r), r.clone()),
                    other => other.strengthen_guarded(closure),
                };
                StratExpr::or_else(a.strengthen(closure), rhs)
            }
            other => other.clone(),
        }
    }

    fn strengthen_guarded(&self, closure: &dyn Fn(&Label) -> Vec<Label>) -> StratExpr {
        match self {
            StratExpr::Rule(r) => StratExpr::Guarded(closure(r), r.clone()),
            StratExpr::Disj(xs) => StratExpr::Disj(xs.iter().map(|x| x.strengthen_guarded(closure)).collect()),
            other => other.strengthen(closure),
        }
    }

    pub fn display<'a>(&'a self, membrane: &'a MembraneName) -> impl fmt::Display + 'a {
        Shown(self, membrane)
    }
}

fn extend(s: &StratExpr, preds: &dyn Fn(&Label) -> Vec<Label>) -> StratExpr {
    match s {
        StratExpr::Rule(r) => {
            let p = preds(r);
            if p.is_empty() {
                s.clone()
            } else {
                StratExpr::or_else(
                    StratExpr::disj(p.into_iter().map(StratExpr::Rule).collect()),
                    s.clone(),
                )
            }
        }
        StratExpr::OrElse(a, b) => StratExpr::OrElse(Box::new(extend(a, preds)), b.clone()),
        StratExpr::Disj(xs) => StratExpr::Disj(xs.iter().map(|x| extend(x, preds)).collect()),
        other => other.clone(),
    }
}

/// Flattens disjunctions, factors `a or-else b | a or-else c` into
/// `a or-else (b | c)` and orders disjuncts: lattices first, then plain
/// rules, each by declaration order.
fn simplify(s: StratExpr, order: &HashMap<&Label, usize>) -> StratExpr {
    match s {
        StratExpr::OrElse(a, b) => StratExpr::or_else(simplify(*a, order), simplify(*b, order)),
        StratExpr::Disj(xs) => {
            let mut flat = Vec::new();
            for x in xs {
                match simplify(x, order) {
                    StratExpr::Disj(ys) => flat.extend(ys),
                    y => flat.push(y),
                }
            }
            let mut merged: Vec<StratExpr> = Vec::new();
            for x in flat {
                if let StratExpr::OrElse(a, b) = &x {
                    if let Some(StratExpr::OrElse(_, pb)) = merged
                        .iter_mut()
                        .find(|m| matches!(m, StratExpr::OrElse(ma, _) if ma == a))
                    {
                        let old = std::mem::replace(&mut **pb, StratExpr::Fail);
                        **pb = simplify(StratExpr::Disj(vec![old, (**b).clone()]), order);
                        continue;
                    }
                }
                if !merged.contains(&x) {
                    merged.push(x);
                }
            }
            let rank = |e: &StratExpr| -> (u8, usize) {
                let plain = matches!(e, StratExpr::Rule(_));
                let idx = e.key_label().and_then(|l| order.get(l)).copied().unwrap_or(usize::MAX);
                (plain as u8, idx)
            };
            merged.sort_by_key(|e| rank(e));
            StratExpr::disj(merged)
        }
        other => other,
    }
}

struct Shown<'a>(&'a StratExpr, &'a MembraneName);

impl Shown<'_> {
    fn child(&self, f: &mut fmt::Formatter<'_>, e: &StratExpr, min: u8) -> fmt::Result {
        if e.level() < min {
            write!(f, "({})", Shown(e, self.1))
        } else {
            write!(f, "{}", Shown(e, self.1))
        }
    }
}

fn qids(ls: &[Label]) -> String {
    let q: Vec<String> = ls.iter().map(|l| format!("'{l}")).collect();
    if q.len() == 1 {
        q[0].clone()
    } else {
        format!("({})", q.join(", "))
    }
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.1;
        match self.0 {
            StratExpr::Fail => f.write_str("fail"),
            StratExpr::Idle => f.write_str("idle"),
            StratExpr::Rule(r) => write!(f, "{r}"),
            StratExpr::Strong(r) => write!(f, "{r} ; mpr-strong({m}, ('{r}, AR))"),
            StratExpr::Guarded(hs, r) => write!(
                f,
                "match H s.t. intersection({}, AR) = empty ; {r} ; mpr-strong({m}, ('{r}, AR))",
                qids(hs)
            ),
            StratExpr::Disj(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    self.child(f, x, 1)?;
                }
                Ok(())
            }
            StratExpr::OrElse(a, b) => {
                self.child(f, a, 1)?;
                f.write_str(" or-else ")?;
                self.child(f, b, 2)
            }
        }
    }
}

fn labels(mdef: &MembraneDef) -> Vec<Label> {
    mdef.labels().cloned().collect()
}

pub fn weak_priority_expression(mdef: &MembraneDef) -> String {
    StratExpr::weak(&labels(mdef), &mdef.priorities).display(&mdef.name).to_string()
}

fn strong_tree(mdef: &MembraneDef) -> StratExpr {
    let rules = labels(mdef);
    let closure = mdef.priority_closure();
    let order: HashMap<&Label, usize> = rules.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let higher = |r: &Label| -> Vec<Label> {
        let mut h: Vec<Label> = closure.higher_than(r).cloned().collect();
        h.sort_by_key(|l| order.get(l).copied().unwrap_or(usize::MAX));
        h
    };
    let s = StratExpr::weak(&rules, &mdef.priorities).strengthen(&higher);
    // Plain calls come first in the strong listing.
    match s {
        StratExpr::Disj(mut xs) => {
            xs.sort_by_key(|e| !matches!(e, StratExpr::Strong(_)));
            StratExpr::Disj(xs)
        }
        other => other,
    }
}

/// The strong-priority strategy without its final `or-else idle`.
pub fn strong_priority_body(mdef: &MembraneDef) -> String {
    if mdef.rules.is_empty() {
        return "idle".into();
    }
    strong_tree(mdef).display(&mdef.name).to_string()
}

pub fn strong_priority_expression(mdef: &MembraneDef) -> String {
    if mdef.rules.is_empty() {
        return "idle".into();
    }
    let e = StratExpr::or_else(strong_tree(mdef), StratExpr::Idle);
    let shown = e.display(&mdef.name).to_string();
    shown
}
