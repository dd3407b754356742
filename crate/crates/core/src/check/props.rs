//! Atomic propositions over configurations.

use crate::lang::{BoolExpr, NatExpr, Prop, Relation};
use crate::model::{count_submultiset, soup_contains, Configuration, MembraneName, Multiset, Object};

/// Membrane propositions are existential over same-named membranes at any
/// depth; `count` sums over them.
pub fn eval_prop(p: &Prop, config: &Configuration) -> bool {
    match p {
        Prop::IsAlive(n) => config.count_membranes(n) > 0,
        Prop::Contains(n, w) => {
            let mut found = false;
            config.for_each_membrane(&mut |m| {
                found |= &m.name == n && soup_contains(w, m.contents.objects());
            });
            found
        }
        Prop::Brace(e) => eval_bool(e, config),
    }
}

fn eval_bool(e: &BoolExpr, config: &Configuration) -> bool {
    let l = eval_nat(&e.lhs, config);
    let r = eval_nat(&e.rhs, config);
    match e.rel {
        Relation::Eq => l == r,
        Relation::Lt => l < r,
        Relation::Le => l <= r,
        Relation::Gt => l > r,
        Relation::Ge => l >= r,
        Relation::Divides => l > 0 && r.is_multiple_of(l),
    }
}

/// Arithmetic saturates rather than overflowing.
pub fn eval_nat(e: &NatExpr, config: &Configuration) -> u128 {
    match e {
        NatExpr::Lit(n) => *n as u128,
        NatExpr::Count(n, w) => count(config, n, w),
        NatExpr::Add(a, b) => eval_nat(a, config).saturating_add(eval_nat(b, config)),
        NatExpr::Mul(a, b) => eval_nat(a, config).saturating_mul(eval_nat(b, config)),
        NatExpr::Pow(a, b) => {
            let base = eval_nat(a, config);
            let exp = eval_nat(b, config);
            match u32::try_from(exp) {
                Ok(x) => base.checked_pow(x).unwrap_or(u128::MAX),
                Err(_) if base <= 1 => base,
                Err(_) => u128::MAX,
            }
        }
    }
}

fn count(config: &Configuration, name: &MembraneName, w: &Multiset<Object>) -> u128 {
    let mut total: u128 = 0;
    config.for_each_membrane(&mut |m| {
        if &m.name == name {
            let k = count_submultiset(m.contents.objects(), w).unwrap_or(0);
            total = total.saturating_add(k as u128);
        }
    });
    total
}
