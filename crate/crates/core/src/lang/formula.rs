//! Temporal formulas over membrane propositions: LTL, CTL and the modal
//! μ-calculus share one AST. A formula may use only one temporal layer.
//!
//! Binding, loosest first: `->` (right associative), `U` (right
//! associative), `\/`, `/\`, then the prefix operators
//! `~ O [] <> [.] <.> A E`. `mu Z .` and `nu Z .` extend as far right as
//! possible. CTL until is written `E (p U q)` or `A (p U q)`.

use std::fmt;

use super::lexer::{tokenize, TokenKind};
use super::parser::{ConfigParser, Cursor};
use super::Diagnostic;
use crate::model::{MembraneName, Multiset, Object};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Prop(Prop),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Always(Box<Formula>),
    Eventually(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    /// CTL path quantifiers; the operand is a single temporal operator.
    Exists(Box<Formula>),
    ForAll(Box<Formula>),
    Mu(String, Box<Formula>),
    Nu(String, Box<Formula>),
    /// `[.] φ`
    Box(Box<Formula>),
    /// `<.> φ`
    Diamond(Box<Formula>),
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop {
    IsAlive(MembraneName),
    Contains(MembraneName, Multiset<Object>),
    Brace(BoolExpr),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolExpr {
    pub lhs: NatExpr,
    pub rel: Relation,
    pub rhs: NatExpr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
    Divides,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NatExpr {
    Lit(u64),
    Count(MembraneName, Multiset<Object>),
    Add(Box<NatExpr>, Box<NatExpr>),
    Mul(Box<NatExpr>, Box<NatExpr>),
    Pow(Box<NatExpr>, Box<NatExpr>),
}

/// The temporal layer a formula belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    /// No temporal operator at all.
    Propositional,
    Ltl,
    Ctl,
    Mu,
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layer::Propositional => "propositional",
            Layer::Ltl => "LTL",
            Layer::Ctl => "CTL",
            Layer::Mu => "mu-calculus",
        })
    }
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }
    pub fn always(f: Formula) -> Formula {
        Formula::Always(Box::new(f))
    }
    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }
    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }
    pub fn exists(f: Formula) -> Formula {
        Formula::Exists(Box::new(f))
    }
    pub fn forall(f: Formula) -> Formula {
        Formula::ForAll(Box::new(f))
    }
    pub fn mu(v: &str, f: Formula) -> Formula {
        Formula::Mu(v.to_string(), Box::new(f))
    }
    pub fn nu(v: &str, f: Formula) -> Formula {
        Formula::Nu(v.to_string(), Box::new(f))
    }
    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }
    pub fn diamond(f: Formula) -> Formula {
        Formula::Diamond(Box::new(f))
    }
    pub fn var(v: &str) -> Formula {
        Formula::Var(v.to_string())
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Prop(_) | Var(_) => vec![],
            Not(a) | Next(a) | Always(a) | Eventually(a) | Exists(a) | ForAll(a) | Mu(_, a)
            | Nu(_, a) | Box(a) | Diamond(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) => vec![a, b],
        }
    }

    /// Distinct atomic propositions in order of first occurrence.
    pub fn props(&self) -> Vec<&Prop> {
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Prop>) {
            if let Formula::Prop(p) = f {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
            for c in f.children() {
                go(c, out);
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Classifies the formula. Errors when layers are mixed or path
    /// quantifiers are misplaced.
    pub fn layer(&self) -> Result<Layer, String> {
        let mut ltl = false;
        let mut ctl = false;
        let mut mu = false;
        classify(self, false, &mut ltl, &mut ctl, &mut mu)?;
        match (ltl, ctl, mu) {
            (false, false, false) => Ok(Layer::Propositional),
            (true, false, false) => Ok(Layer::Ltl),
            (false, true, false) => Ok(Layer::Ctl),
            (false, false, true) => Ok(Layer::Mu),
            _ => Err("formula mixes LTL, CTL and mu-calculus operators".into()),
        }
    }
}

fn classify(
    f: &Formula,
    under_quantifier: bool,
    ltl: &mut bool,
    ctl: &mut bool,
    mu: &mut bool,
) -> Result<(), String> {
    use Formula::*;
    match f {
        Exists(a) | ForAll(a) => {
            *ctl = true;
            if !matches!(**a, Next(_) | Always(_) | Eventually(_) | Until(..)) {
                return Err("A and E must be followed by O, [], <> or an until".into());
            }
            classify(a, true, ltl, ctl, mu)
        }
        Next(_) | Always(_) | Eventually(_) | Until(..) => {
            if !under_quantifier {
                *ltl = true;
            }
            for c in f.children() {
                classify(c, false, ltl, ctl, mu)?;
            }
            Ok(())
        }
        Mu(..) | Nu(..) | Box(_) | Diamond(_) | Var(_) => {
            *mu = true;
            for c in f.children() {
                classify(c, false, ltl, ctl, mu)?;
            }
            Ok(())
        }
        _ => {
            for c in f.children() {
                classify(c, false, ltl, ctl, mu)?;
            }
            Ok(())
        }
    }
}

/// Checks that every fixpoint variable is bound and occurs under an even
/// number of negations inside its binder.
fn check_fixpoints(f: &Formula) -> Result<(), String> {
    fn go(f: &Formula, env: &mut Vec<(String, bool)>, positive: bool) -> Result<(), String> {
        use Formula::*;
        match f {
            Var(v) => match env.iter().rev().find(|(n, _)| n == v) {
                None => Err(format!("unbound fixpoint variable {v}")),
                Some((_, pol)) if *pol != positive => {
                    Err(format!("fixpoint variable {v} occurs negatively"))
                }
                Some(_) => Ok(()),
            },
            Mu(v, a) | Nu(v, a) => {
                env.push((v.clone(), positive));
                let r = go(a, env, positive);
                env.pop();
                r
            }
            Not(a) => go(a, env, !positive),
            Implies(a, b) => {
                go(a, env, !positive)?;
                go(b, env, positive)
            }
            _ => f.children().into_iter().try_for_each(|c| go(c, env, positive)),
        }
    }
    go(f, &mut Vec::new(), true)
}

// ---------------------------------------------------------------------------
// Parsing

/// Parses a formula and checks its layer and fixpoint variables.
pub fn parse_formula(text: &str) -> Result<Formula, Diagnostic> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks, text);
    let mut p = FormulaParser {
        cur: &mut cur,
        bound: Vec::new(),
    };
    let f = p.implication()?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of formula"));
    }
    check_fixpoints(&f).map_err(|m| Diagnostic::new(1, 1, m))?;
    f.layer().map_err(|m| Diagnostic::new(1, 1, m))?;
    Ok(f)
}

struct FormulaParser<'c, 't> {
    cur: &'c mut Cursor<'t>,
    bound: Vec<String>,
}

const RESERVED: [&str; 13] = [
    "O", "U", "A", "E", "mu", "nu", "true", "false", "isAlive", "contains", "count", "divides", "empty",
];

impl FormulaParser<'_, '_> {
    fn implication(&mut self) -> Result<Formula, Diagnostic> {
        let lhs = self.until()?;
        if self.cur.eat_sym("->") {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, Diagnostic> {
        let lhs = self.disjunction()?;
        if self.cur.eat_ident("U") {
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, Diagnostic> {
        let mut lhs = self.conjunction()?;
        while self.cur.eat_sym("\\/") {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, Diagnostic> {
        let mut lhs = self.unary()?;
        while self.cur.eat_sym("/\\") {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, Diagnostic> {
        let cur = &mut *self.cur;
        if cur.eat_sym("~") {
            return Ok(Formula::not(self.unary()?));
        }
        if cur.eat_ident("O") {
            return Ok(Formula::next(self.unary()?));
        }
        if cur.at_sym("[") && cur.peek_at(1).is_some_and(|t| t.is_sym("]")) {
            cur.pos += 2;
            return Ok(Formula::always(self.unary()?));
        }
        if cur.at_sym("[")
            && cur.peek_at(1).is_some_and(|t| t.is_sym("."))
            && cur.peek_at(2).is_some_and(|t| t.is_sym("]"))
        {
            cur.pos += 3;
            return Ok(Formula::boxed(self.unary()?));
        }
        if cur.at_sym("<") && cur.peek_at(1).is_some_and(|t| t.is_sym(">")) {
            cur.pos += 2;
            return Ok(Formula::eventually(self.unary()?));
        }
        if cur.at_sym("<")
            && cur.peek_at(1).is_some_and(|t| t.is_sym("."))
            && cur.peek_at(2).is_some_and(|t| t.is_sym(">"))
        {
            cur.pos += 3;
            return Ok(Formula::diamond(self.unary()?));
        }
        if cur.at_ident("A") || cur.at_ident("E") {
            let exists = cur.at_ident("E");
            cur.pos += 1;
            // `E [p U q]` is accepted as a synonym of `E (p U q)`.
            let body = if self.cur.at_sym("[")
                && !self.cur.peek_at(1).is_some_and(|t| t.is_sym("]") || t.is_sym("."))
            {
                self.cur.pos += 1;
                let f = self.implication()?;
                self.cur.expect_sym("]")?;
                f
            } else {
                self.unary()?
            };
            return Ok(if exists {
                Formula::exists(body)
            } else {
                Formula::forall(body)
            });
        }
        if cur.at_ident("mu") || cur.at_ident("nu") {
            let least = cur.at_ident("mu");
            cur.pos += 1;
            let (v, tok) = cur.expect_ident("a fixpoint variable")?;
            if RESERVED.contains(&v) {
                return Err(Diagnostic::new(tok.line, tok.col, format!("{v} is reserved")));
            }
            let v = v.to_string();
            cur.expect_sym(".")?;
            self.bound.push(v.clone());
            let body = self.implication();
            self.bound.pop();
            let body = body?;
            return Ok(if least {
                Formula::mu(&v, body)
            } else {
                Formula::nu(&v, body)
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, Diagnostic> {
        let cur = &mut *self.cur;
        if cur.eat_sym("(") {
            let f = self.implication()?;
            self.cur.expect_sym(")")?;
            return Ok(f);
        }
        if cur.eat_sym("{") {
            let e = self.bool_expr()?;
            self.cur.expect_sym("}")?;
            return Ok(Formula::Prop(Prop::Brace(e)));
        }
        let (name, tok) = cur.expect_ident("a formula")?;
        match name {
            "true" => Ok(Formula::True),
            "false" => Ok(Formula::False),
            "isAlive" => {
                cur.expect_sym("(")?;
                let (m, _) = cur.expect_ident("a membrane name")?;
                cur.expect_sym(")")?;
                Ok(Formula::Prop(Prop::IsAlive(MembraneName::new(m))))
            }
            "contains" => {
                let (m, w) = self.membrane_and_objects()?;
                Ok(Formula::Prop(Prop::Contains(m, w)))
            }
            _ if self.bound.iter().any(|b| b == name) => Ok(Formula::var(name)),
            _ if name.chars().next().is_some_and(char::is_uppercase) && !RESERVED.contains(&name) => {
                Err(Diagnostic::new(tok.line, tok.col, format!("unbound fixpoint variable {name}")))
            }
            _ => Err(Diagnostic::new(tok.line, tok.col, format!("unknown proposition {name}"))),
        }
    }

    fn membrane_and_objects(&mut self) -> Result<(MembraneName, Multiset<Object>), Diagnostic> {
        self.cur.expect_sym("(")?;
        let (m, _) = self.cur.expect_ident("a membrane name")?;
        self.cur.expect_sym(",")?;
        let w = ConfigParser { spec: None }.objects(self.cur)?;
        self.cur.expect_sym(")")?;
        Ok((MembraneName::new(m), w))
    }

    fn bool_expr(&mut self) -> Result<BoolExpr, Diagnostic> {
        let lhs = self.nat_sum()?;
        let rel = match self.cur.peek() {
            Some(t) if t.is_sym("=") => Relation::Eq,
            Some(t) if t.is_sym("<") => Relation::Lt,
            Some(t) if t.is_sym("<=") => Relation::Le,
            Some(t) if t.is_sym(">") => Relation::Gt,
            Some(t) if t.is_sym(">=") => Relation::Ge,
            Some(t) if t.is_ident("divides") => Relation::Divides,
            _ => return Err(self.cur.unexpected("a relation")),
        };
        self.cur.pos += 1;
        let rhs = self.nat_sum()?;
        Ok(BoolExpr { lhs, rel, rhs })
    }

    fn nat_sum(&mut self) -> Result<NatExpr, Diagnostic> {
        let mut lhs = self.nat_product()?;
        while self.cur.eat_sym("+") {
            lhs = NatExpr::Add(Box::new(lhs), Box::new(self.nat_product()?));
        }
        Ok(lhs)
    }

    fn nat_product(&mut self) -> Result<NatExpr, Diagnostic> {
        let mut lhs = self.nat_power()?;
        while self.cur.eat_sym("*") {
            lhs = NatExpr::Mul(Box::new(lhs), Box::new(self.nat_power()?));
        }
        Ok(lhs)
    }

    fn nat_power(&mut self) -> Result<NatExpr, Diagnostic> {
        let base = self.nat_atom()?;
        if self.cur.eat_sym("^") {
            return Ok(NatExpr::Pow(Box::new(base), Box::new(self.nat_power()?)));
        }
        Ok(base)
    }

    fn nat_atom(&mut self) -> Result<NatExpr, Diagnostic> {
        if let Some(TokenKind::Nat(n)) = self.cur.peek().map(|t| &t.kind) {
            self.cur.pos += 1;
            return Ok(NatExpr::Lit(*n));
        }
        if self.cur.eat_sym("(") {
            let e = self.nat_sum()?;
            self.cur.expect_sym(")")?;
            return Ok(e);
        }
        if self.cur.at_ident("count") {
            let tok = self.cur.next().unwrap();
            let (m, w) = self.membrane_and_objects()?;
            if w.is_empty() {
                return Err(Diagnostic::new(tok.line, tok.col, "count needs a nonempty pattern"));
            }
            return Ok(NatExpr::Count(m, w));
        }
        Err(self.cur.unexpected("a number or count(...)"))
    }
}

// ---------------------------------------------------------------------------
// Rendering; binary operators are always parenthesized so the output
// parses back to the same tree.

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => f.write_str("true"),
            False => f.write_str("false"),
            Prop(p) => write!(f, "{p}"),
            Not(a) => write!(f, "~ {a}"),
            And(a, b) => write!(f, "({a} /\\ {b})"),
            Or(a, b) => write!(f, "({a} \\/ {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            Next(a) => write!(f, "O {a}"),
            Always(a) => write!(f, "[] {a}"),
            Eventually(a) => write!(f, "<> {a}"),
            Until(a, b) => write!(f, "({a} U {b})"),
            Exists(a) => write!(f, "E {a}"),
            ForAll(a) => write!(f, "A {a}"),
            Mu(v, a) => write!(f, "(mu {v} . {a})"),
            Nu(v, a) => write!(f, "(nu {v} . {a})"),
            Box(a) => write!(f, "[.] {a}"),
            Diamond(a) => write!(f, "<.> {a}"),
            Var(v) => f.write_str(v),
        }
    }
}

fn fmt_objs(f: &mut fmt::Formatter<'_>, w: &Multiset<Object>) -> fmt::Result {
    for (i, o) in w.iter_expanded().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{o}")?;
    }
    Ok(())
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::IsAlive(m) => write!(f, "isAlive({m})"),
            Prop::Contains(m, w) => {
                write!(f, "contains({m}, ")?;
                if w.is_empty() {
                    f.write_str("empty")?;
                }
                fmt_objs(f, w)?;
                f.write_str(")")
            }
            Prop::Brace(e) => write!(f, "{{ {e} }}"),
        }
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel, self.rhs)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Divides => "divides",
        })
    }
}

impl fmt::Display for NatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatExpr::Lit(n) => write!(f, "{n}"),
            NatExpr::Count(m, w) => {
                write!(f, "count({m}, ")?;
                fmt_objs(f, w)?;
                f.write_str(")")
            }
            NatExpr::Add(a, b) => write!(f, "({a} + {b})"),
            NatExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            NatExpr::Pow(a, b) => write!(f, "({a} ^ {b})"),
        }
    }
}
