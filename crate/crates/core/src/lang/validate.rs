use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;
use super::parser::soup_vars;
use super::Diagnostic;
use crate::model::{Label, Target};

/// Semantic checks on a parsed specification. An empty result means the
/// spec is well formed.
pub fn validate_spec(spec: &SystemSpec) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut implicit_arity: BTreeMap<String, usize> = BTreeMap::new();
    for m in &spec.membranes {
        validate_membrane(spec, m, &mut implicit_arity, &mut diags);
    }
    diags
}

fn validate_membrane(
    spec: &SystemSpec,
    m: &MembraneDef,
    implicit_arity: &mut BTreeMap<String, usize>,
    diags: &mut Vec<Diagnostic>,
) {
    let mut seen = BTreeSet::new();
    for r in &m.rules {
        if !seen.insert(&r.label) {
            diags.push(Diagnostic::new(
                r.line,
                r.col,
                format!("duplicate rule label {} in membrane {}", r.label, m.name),
            ));
        }
        validate_rule(spec, m, r, implicit_arity, diags);
    }

    let mut prio_ok = true;
    for (hi, lo) in &m.priorities {
        for l in [hi, lo] {
            if m.rule(l).is_none() {
                prio_ok = false;
                diags.push(Diagnostic::new(m.line, 1, format!("unknown rule label {l}")));
            }
        }
    }
    if prio_ok {
        let rel = m.priority_closure();
        let cyclic: Vec<&Label> = m.labels().filter(|l| rel.greater(l, l)).collect();
        if let Some(first) = cyclic.first() {
            diags.push(Diagnostic::new(
                m.line,
                1,
                format!("priority cycle involving {first} in membrane {}", m.name),
            ));
        }
    }
}

fn validate_rule(
    spec: &SystemSpec,
    m: &MembraneDef,
    r: &RuleDef,
    implicit_arity: &mut BTreeMap<String, usize>,
    diags: &mut Vec<Diagnostic>,
) {
    let mut err = |msg: String| diags.push(Diagnostic::new(r.line, r.col, format!("rule {}: {msg}", r.label)));

    if r.lhs.is_empty() {
        err("empty left-hand side".into());
    }
    for p in r.lhs.iter().chain(&r.promoters).chain(&r.inhibitors) {
        if p.is_delta() {
            err("delta may only appear on the right-hand side".into());
        }
    }
    for p in &r.lhs {
        if let ObjectPattern::Compound(_, args) = p {
            if args.iter().any(|a| matches!(a, ArgExpr::Succ(_) | ArgExpr::Not(_))) {
                err("s(_) and not are not allowed in the left-hand side".into());
            }
        }
    }

    let mut bound = soup_vars(&r.lhs);
    bound.extend(soup_vars(&r.promoters));
    for v in soup_vars(&r.inhibitors) {
        if !bound.contains(&v) {
            err(format!("inhibitor binds new variable {}", m.vars[v.0].name));
        }
    }
    for part in &r.rhs {
        let vars = match part {
            RhsPart::Directed(s, _) => soup_vars(s),
            RhsPart::Division(a, b) => {
                let mut v = soup_vars(a);
                v.extend(soup_vars(b));
                v
            }
        };
        for v in vars {
            if !bound.contains(&v) {
                err(format!("unbound variable {} in right-hand side", m.vars[v.0].name));
            }
        }
        if let RhsPart::Directed(_, Target::In(n)) = part {
            if spec.membrane(n).is_none() {
                err(format!("unknown membrane name {n} in target"));
            }
        }
    }

    if r.kind == RuleKind::Xev {
        let stringy = |p: &ObjectPattern| matches!(p, ObjectPattern::Atom(_) | ObjectPattern::Seq(_));
        let single_rhs = match r.rhs.as_slice() {
            [RhsPart::Directed(s, _)] => s.len() == 1 && stringy(&s[0]),
            _ => false,
        };
        if r.lhs.len() != 1 || !stringy(&r.lhs[0]) || !single_rhs {
            err("xev rules rewrite one string pattern into one string pattern with at most one target".into());
        }
    }

    let all = r
        .lhs
        .iter()
        .chain(&r.promoters)
        .chain(&r.inhibitors)
        .chain(r.rhs.iter().flat_map(|p| match p {
            RhsPart::Directed(s, _) => s.iter().chain([].iter()),
            RhsPart::Division(a, b) => a.iter().chain(b.iter()),
        }));
    for p in all {
        if let Err(msg) = check_pattern(&spec.signature, m, p, implicit_arity) {
            err(msg);
        }
    }
}

fn check_pattern(
    sig: &Signature,
    m: &MembraneDef,
    p: &ObjectPattern,
    implicit_arity: &mut BTreeMap<String, usize>,
) -> Result<(), String> {
    match p {
        ObjectPattern::Atom(s) => {
            if sig.declared && !p.is_delta() && !sig.is_atom(s.as_str()) {
                return Err(format!("unknown symbol {s}"));
            }
        }
        ObjectPattern::Seq(atoms) => {
            if sig.declared {
                if sig.seq_identity().is_none() {
                    return Err("no string operator _·_ declared".into());
                }
                if let Some(a) = atoms.iter().find(|a| !sig.is_atom(a.as_str())) {
                    return Err(format!("unknown symbol {a}"));
                }
            }
        }
        ObjectPattern::Compound(s, args) => {
            if !sig.declared {
                let arity = *implicit_arity.entry(s.to_string()).or_insert(args.len());
                if arity != args.len() {
                    return Err(format!("{s} used with {} and {} arguments", arity, args.len()));
                }
                return Ok(());
            }
            let Some(sorts) = sig.compound(s.as_str()) else {
                return Err(format!("unknown symbol {s}"));
            };
            if sorts.len() != args.len() {
                return Err(format!(
                    "{s} expects {} arguments, found {}",
                    sorts.len(),
                    args.len()
                ));
            }
            for (i, (sort, a)) in sorts.iter().zip(args).enumerate() {
                let got = arg_sort(sig, m, a)?;
                if got != *sort {
                    return Err(format!("argument {} of {s} must have sort {sort}, found {got}", i + 1));
                }
            }
        }
    }
    Ok(())
}

fn arg_sort(sig: &Signature, m: &MembraneDef, a: &ArgExpr) -> Result<Sort, String> {
    Ok(match a {
        ArgExpr::Nat(_) => Sort::Nat,
        ArgExpr::Bool(_) => Sort::Bool,
        ArgExpr::Var(v) => m.vars[v.0].sort,
        ArgExpr::Succ(x) => {
            if arg_sort(sig, m, x)? != Sort::Nat {
                return Err("s(_) expects a Nat".into());
            }
            Sort::Nat
        }
        ArgExpr::Not(x) => {
            if arg_sort(sig, m, x)? != Sort::Bool {
                return Err("not expects a Bool".into());
            }
            Sort::Bool
        }
        ArgExpr::Atom(s) => {
            if !sig.is_atom(s.as_str()) {
                return Err(format!("unknown symbol {s}"));
            }
            Sort::Obj
        }
    })
}
