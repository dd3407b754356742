//! Matching rule patterns against membrane contents.

use std::fmt;

use crate::lang::{ArgExpr, MembraneDef, ObjectPattern, RhsPart, RuleDef, RuleKind};
use crate::model::{Argument, Multiset, Object, Symbol};

/// Bindings for the variables of one membrane, indexed by declaration
/// order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution(Vec<Option<Argument>>);

impl Substitution {
    pub fn empty(vars: usize) -> Self {
        Substitution(vec![None; vars])
    }

    pub fn get(&self, v: crate::lang::VarId) -> Option<&Argument> {
        self.0.get(v.0).and_then(Option::as_ref)
    }

    fn bind(&mut self, v: crate::lang::VarId, a: Argument) -> bool {
        match &self.0[v.0] {
            Some(b) => *b == a,
            None => {
                self.0[v.0] = Some(a);
                true
            }
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.0.iter().enumerate() {
            if let Some(a) = a {
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                write!(f, "#{i} := {a}")?;
            }
        }
        Ok(())
    }
}

/// Where a rule instance applies.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    /// On the loose objects of the membrane.
    Top,
    /// Inside a string object, at a position of its atom sequence.
    InsideObject { object: Object, position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleInstance {
    /// Index into the membrane's rule list.
    pub rule: usize,
    pub subst: Substitution,
    pub site: Site,
}

fn eval_arg(a: &ArgExpr, s: &Substitution) -> Option<Argument> {
    Some(match a {
        ArgExpr::Nat(n) => Argument::Nat(*n),
        ArgExpr::Bool(b) => Argument::Bool(*b),
        ArgExpr::Atom(x) => Argument::Atom(x.clone()),
        ArgExpr::Var(v) => s.get(*v)?.clone(),
        ArgExpr::Succ(x) => match eval_arg(x, s)? {
            Argument::Nat(n) => Argument::Nat(n.checked_add(1)?),
            _ => return None,
        },
        ArgExpr::Not(x) => match eval_arg(x, s)? {
            Argument::Bool(b) => Argument::Bool(!b),
            _ => return None,
        },
    })
}

/// The object denoted by `p` under `s`, or `None` if a variable is unbound.
pub(crate) fn instantiate(p: &ObjectPattern, s: &Substitution, identity: Option<&Symbol>) -> Option<Object> {
    Some(match p {
        ObjectPattern::Atom(x) => Object::Atom(x.clone()),
        ObjectPattern::Seq(v) => Object::seq(v.clone(), identity),
        ObjectPattern::Compound(f, args) => Object::Compound(
            f.clone(),
            args.iter().map(|a| eval_arg(a, s)).collect::<Option<_>>()?,
        ),
    })
}

pub(crate) fn instantiate_soup(
    ps: &[ObjectPattern],
    s: &Substitution,
    identity: Option<&Symbol>,
) -> Option<Multiset<Object>> {
    ps.iter().map(|p| instantiate(p, s, identity)).collect()
}

/// Matches an argument pattern, extending `s`. `s(p)` and `not p` are
/// matched by inversion.
fn match_arg(p: &ArgExpr, v: &Argument, s: &mut Substitution) -> bool {
    match (p, v) {
        (ArgExpr::Nat(n), Argument::Nat(m)) => n == m,
        (ArgExpr::Bool(a), Argument::Bool(b)) => a == b,
        (ArgExpr::Atom(a), Argument::Atom(b)) => a == b,
        (ArgExpr::Var(x), _) => s.bind(*x, v.clone()),
        (ArgExpr::Succ(x), Argument::Nat(n)) => *n > 0 && match_arg(x, &Argument::Nat(n - 1), s),
        (ArgExpr::Not(x), Argument::Bool(b)) => match_arg(x, &Argument::Bool(!b), s),
        _ => false,
    }
}

fn match_object(p: &ObjectPattern, o: &Object, s: &mut Substitution) -> bool {
    match (p, o) {
        (ObjectPattern::Atom(a), Object::Atom(b)) => a == b,
        (ObjectPattern::Seq(a), Object::Seq(b)) => a == b,
        (ObjectPattern::Compound(f, args), Object::Compound(g, vals)) => {
            f == g
                && args.len() == vals.len()
                && args.iter().zip(vals).all(|(a, v)| match_arg(a, v, s))
        }
        _ => false,
    }
}

/// Every substitution extending `s` under which `pats` is a submultiset of
/// `pool`. Distinct object choices that induce the same substitution are
/// reported once.
pub(crate) fn match_soup(
    pats: &[ObjectPattern],
    pool: &Multiset<Object>,
    s: &Substitution,
    identity: Option<&Symbol>,
) -> Vec<Substitution> {
    let mut pool = pool.clone();
    let mut out = Vec::new();
    let mut s = s.clone();
    match_rec(pats, &mut pool, &mut s, identity, &mut out);
    out.sort();
    out.dedup();
    out
}

fn match_rec(
    pats: &[ObjectPattern],
    pool: &mut Multiset<Object>,
    s: &mut Substitution,
    identity: Option<&Symbol>,
    out: &mut Vec<Substitution>,
) {
    let Some((p, rest)) = pats.split_first() else {
        out.push(s.clone());
        return;
    };
    if let Some(o) = instantiate(p, s, identity) {
        if pool.remove(&o) {
            match_rec(rest, pool, s, identity, out);
            pool.insert(o);
        }
        return;
    }
    let candidates: Vec<Object> = pool
        .distinct()
        .filter(|o| matches!((p, o), (ObjectPattern::Compound(f, _), Object::Compound(g, _)) if f == g))
        .cloned()
        .collect();
    for o in candidates {
        let mut s2 = s.clone();
        if match_object(p, &o, &mut s2) {
            pool.remove(&o);
            match_rec(rest, pool, &mut s2, identity, out);
            pool.insert(o);
        }
    }
}

/// Positions where `pat` occurs as a contiguous block of `atoms`.
fn occurrences<'a>(pat: &[Symbol], atoms: &'a [Symbol]) -> impl Iterator<Item = usize> + 'a {
    let pat: Vec<Symbol> = pat.to_vec();
    (0..(atoms.len() + 1).saturating_sub(pat.len())).filter(move |&i| atoms[i..i + pat.len()] == pat[..])
}

fn string_of(p: &ObjectPattern) -> Option<&[Symbol]> {
    match p {
        ObjectPattern::Atom(s) => Some(std::slice::from_ref(s)),
        ObjectPattern::Seq(v) => Some(v),
        ObjectPattern::Compound(..) => None,
    }
}

/// All instances of the membrane's rules applicable to the unfrozen
/// objects `soup`. Promoters and inhibitors are evaluated against
/// `initial`, the membrane contents at the start of the step.
pub fn applicable_instances(
    mdef: &MembraneDef,
    soup: &Multiset<Object>,
    initial: &Multiset<Object>,
    identity: Option<&Symbol>,
) -> Vec<RuleInstance> {
    let mut out = Vec::new();
    for (idx, r) in mdef.rules.iter().enumerate() {
        rule_instances(mdef, idx, r, soup, initial, identity, &mut out);
    }
    out
}

fn rule_instances(
    mdef: &MembraneDef,
    idx: usize,
    r: &RuleDef,
    soup: &Multiset<Object>,
    initial: &Multiset<Object>,
    identity: Option<&Symbol>,
    out: &mut Vec<RuleInstance>,
) {
    let empty = Substitution::empty(mdef.vars.len());
    match r.kind {
        RuleKind::Xev => {
            let Some(pat) = r.lhs.first().and_then(string_of) else {
                return;
            };
            for o in soup.distinct() {
                let Some(atoms) = o.as_string() else { continue };
                for position in occurrences(pat, atoms) {
                    out.push(RuleInstance {
                        rule: idx,
                        subst: empty.clone(),
                        site: Site::InsideObject {
                            object: o.clone(),
                            position,
                        },
                    });
                }
            }
        }
        RuleKind::Ev => {
            for subst in match_soup(&r.lhs, soup, &empty, identity) {
                out.push(RuleInstance {
                    rule: idx,
                    subst,
                    site: Site::Top,
                });
            }
        }
        RuleKind::Cev => {
            for s in match_soup(&r.lhs, soup, &empty, identity) {
                let lhs = instantiate_soup(&r.lhs, &s, identity).expect("lhs is ground after matching");
                let Some(rest) = initial.checked_sub(&lhs) else {
                    continue;
                };
                for subst in match_soup(&r.promoters, &rest, &s, identity) {
                    if r.has_inhibitors {
                        let inh = instantiate_soup(&r.inhibitors, &subst, identity)
                            .expect("inhibitor variables are bound");
                        if lhs.sum(&inh).is_submultiset_of(initial) {
                            continue;
                        }
                    }
                    out.push(RuleInstance {
                        rule: idx,
                        subst,
                        site: Site::Top,
                    });
                }
            }
        }
    }
}

/// The objects an instance removes from the membrane soup.
pub(crate) fn consumed(mdef: &MembraneDef, inst: &RuleInstance, identity: Option<&Symbol>) -> Multiset<Object> {
    match &inst.site {
        Site::Top => instantiate_soup(&mdef.rules[inst.rule].lhs, &inst.subst, identity)
            .expect("instance substitution binds the lhs"),
        Site::InsideObject { object, .. } => Multiset::singleton(object.clone()),
    }
}

/// Messages an instance produces, as `(parts, targets)` ready to merge.
pub(crate) fn produced(
    mdef: &MembraneDef,
    inst: &RuleInstance,
    identity: Option<&Symbol>,
) -> Vec<crate::model::TargetMessage> {
    use crate::model::{Target, TargetMessage};
    let r = &mdef.rules[inst.rule];
    if let Site::InsideObject { object, position } = &inst.site {
        let atoms = object.as_string().expect("xev site is a string");
        let pat_len = string_of(&r.lhs[0]).map_or(0, <[Symbol]>::len);
        let (replacement, target) = match r.rhs.first() {
            Some(RhsPart::Directed(s, t)) => (string_of(&s[0]).unwrap_or(&[]).to_vec(), t.clone()),
            _ => (Vec::new(), Target::Here),
        };
        let mut rewritten = atoms[..*position].to_vec();
        rewritten.extend(replacement);
        rewritten.extend_from_slice(&atoms[position + pat_len..]);
        return vec![TargetMessage::Directed {
            payload: Multiset::singleton(Object::seq(rewritten, identity)),
            target,
        }];
    }
    let inst_soup = |s: &[ObjectPattern]| {
        instantiate_soup(s, &inst.subst, identity).expect("rhs variables are bound")
    };
    r.rhs
        .iter()
        .map(|part| match part {
            RhsPart::Directed(s, t) => TargetMessage::Directed {
                payload: inst_soup(s),
                target: t.clone(),
            },
            RhsPart::Division(a, b) => TargetMessage::Division {
                left: inst_soup(a),
                right: inst_soup(b),
            },
        })
        .collect()
}
