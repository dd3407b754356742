//! Modal μ-calculus by fixpoint iteration, and CTL through its
//! translation into μ-calculus.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::graph::Kripke;
use crate::lang::{Formula, Prop};

/// The set of states satisfying a closed formula. Fixpoints are computed
/// naively: ν from all states down, μ from the empty set up.
pub fn denotation<K: Kripke>(k: &K, phi: &Formula) -> Result<FixedBitSet, String> {
    let succ: Vec<Vec<usize>> = (0..k.len()).map(|s| k.successors(s).collect()).collect();
    let mut ev = Eval { k, succ, props: HashMap::new(), env: Vec::new() };
    ev.eval(phi)
}

struct Eval<'a, K> {
    k: &'a K,
    succ: Vec<Vec<usize>>,
    props: HashMap<Prop, FixedBitSet>,
    env: Vec<(String, FixedBitSet)>,
}

impl<K: Kripke> Eval<'_, K> {
    fn n(&self) -> usize {
        self.succ.len()
    }

    fn all(&self) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.n());
        b.insert_range(..);
        b
    }

    fn complement(&self, mut b: FixedBitSet) -> FixedBitSet {
        b.toggle_range(..);
        b
    }

    fn eval(&mut self, f: &Formula) -> Result<FixedBitSet, String> {
        use Formula as F;
        Ok(match f {
            F::True => self.all(),
            F::False => FixedBitSet::with_capacity(self.n()),
            F::Prop(p) => {
                if let Some(b) = self.props.get(p) {
                    return Ok(b.clone());
                }
                let mut b = FixedBitSet::with_capacity(self.n());
                for s in 0..self.n() {
                    b.set(s, self.k.holds(p, s));
                }
                self.props.insert(p.clone(), b.clone());
                b
            }
            F::Not(a) => {
                let x = self.eval(a)?;
                self.complement(x)
            }
            F::And(a, b) => {
                let mut x = self.eval(a)?;
                x.intersect_with(&self.eval(b)?);
                x
            }
            F::Or(a, b) => {
                let mut x = self.eval(a)?;
                x.union_with(&self.eval(b)?);
                x
            }
            F::Implies(a, b) => {
                let x = self.eval(a)?;
                let mut x = self.complement(x);
                x.union_with(&self.eval(b)?);
                x
            }
            F::Box(a) => {
                let x = self.eval(a)?;
                let mut out = FixedBitSet::with_capacity(self.n());
                for s in 0..self.n() {
                    out.set(s, self.succ[s].iter().all(|&t| x.contains(t)));
                }
                out
            }
            F::Diamond(a) => {
                let x = self.eval(a)?;
                let mut out = FixedBitSet::with_capacity(self.n());
                for s in 0..self.n() {
                    out.set(s, self.succ[s].iter().any(|&t| x.contains(t)));
                }
                out
            }
            F::Var(v) => match self.env.iter().rev().find(|(n, _)| n == v) {
                Some((_, b)) => b.clone(),
                None => return Err(format!("unbound fixpoint variable {v}")),
            },
            F::Mu(v, a) | F::Nu(v, a) => {
                let mut x = if matches!(f, F::Mu(..)) {
                    FixedBitSet::with_capacity(self.n())
                } else {
                    self.all()
                };
                loop {
                    self.env.push((v.clone(), x.clone()));
                    let y = self.eval(a);
                    self.env.pop();
                    let y = y?;
                    if y == x {
                        break x;
                    }
                    x = y;
                }
            }
            F::Exists(_) | F::ForAll(_) => return self.eval(&ctl_to_mu(f)?),
            other => return Err(format!("not a state formula: {other}")),
        })
    }
}

/// Rewrites CTL operators into fixpoints; μ-calculus and propositional
/// parts are kept as they are.
pub fn ctl_to_mu(phi: &Formula) -> Result<Formula, String> {
    let mut fresh = 0;
    translate(phi, &mut fresh)
}

fn translate(f: &Formula, fresh: &mut usize) -> Result<Formula, String> {
    use Formula as F;
    let mut var = || {
        *fresh += 1;
        format!("Z{fresh}")
    };
    Ok(match f {
        F::True | F::False | F::Prop(_) | F::Var(_) => f.clone(),
        F::Not(a) => F::not(translate(a, fresh)?),
        F::And(a, b) => F::and(translate(a, fresh)?, translate(b, fresh)?),
        F::Or(a, b) => F::or(translate(a, fresh)?, translate(b, fresh)?),
        F::Implies(a, b) => F::implies(translate(a, fresh)?, translate(b, fresh)?),
        F::Box(a) => F::boxed(translate(a, fresh)?),
        F::Diamond(a) => F::diamond(translate(a, fresh)?),
        F::Mu(v, a) => F::mu(v, translate(a, fresh)?),
        F::Nu(v, a) => F::nu(v, translate(a, fresh)?),
        F::Exists(path) | F::ForAll(path) => {
            let exists = matches!(f, F::Exists(_));
            let modal = |x: Formula| if exists { F::diamond(x) } else { F::boxed(x) };
            match &**path {
                F::Next(p) => modal(translate(p, fresh)?),
                F::Eventually(p) => {
                    let z = var();
                    F::mu(&z, F::or(translate(p, fresh)?, modal(F::var(&z))))
                }
                F::Always(p) => {
                    let z = var();
                    F::nu(&z, F::and(translate(p, fresh)?, modal(F::var(&z))))
                }
                F::Until(p, q) => {
                    let z = var();
                    let (p, q) = (translate(p, fresh)?, translate(q, fresh)?);
                    F::mu(&z, F::or(q, F::and(p, modal(F::var(&z)))))
                }
                other => return Err(format!("path quantifier over {other}")),
            }
        }
        other => return Err(format!("not a CTL formula: {other}")),
    })
}
