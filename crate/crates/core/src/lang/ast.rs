//! Parsed membrane specifications.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::{Label, MembraneName, Symbol, Target, SEQ_OP};

/// How rule priorities restrict the maximal parallel step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PriorityMode {
    /// Priorities are ignored.
    Ignore,
    Weak,
    #[default]
    Strong,
}

impl std::str::FromStr for PriorityMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(PriorityMode::Ignore),
            "weak" => Ok(PriorityMode::Weak),
            "strong" => Ok(PriorityMode::Strong),
            _ => Err(format!("unknown priority mode {s}, expected weak or strong")),
        }
    }
}

impl fmt::Display for PriorityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PriorityMode::Ignore => "none",
            PriorityMode::Weak => "weak",
            PriorityMode::Strong => "strong",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Nat,
    Bool,
    Obj,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Nat => "Nat",
            Sort::Bool => "Bool",
            Sort::Obj => "Obj",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignatureDecl {
    Atoms(Vec<Symbol>),
    Compound { symbol: Symbol, args: Vec<Sort> },
    /// The string constructor `_·_` with its identity atom.
    Seq { identity: Symbol },
}

/// Object signature. With `declared == false` (no signature block) plain
/// identifiers are implicitly atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub declared: bool,
    pub import_nat: bool,
    pub decls: Vec<SignatureDecl>,
}

impl Signature {
    pub fn is_atom(&self, s: &str) -> bool {
        self.decls.iter().any(|d| match d {
            SignatureDecl::Atoms(v) => v.iter().any(|x| x.as_str() == s),
            SignatureDecl::Seq { identity } => identity.as_str() == s,
            SignatureDecl::Compound { .. } => false,
        })
    }

    pub fn compound(&self, s: &str) -> Option<&[Sort]> {
        self.decls.iter().find_map(|d| match d {
            SignatureDecl::Compound { symbol, args } if symbol.as_str() == s => Some(&args[..]),
            _ => None,
        })
    }

    pub fn seq_identity(&self) -> Option<&Symbol> {
        self.decls.iter().find_map(|d| match d {
            SignatureDecl::Seq { identity } => Some(identity),
            _ => None,
        })
    }
}

/// Argument expression in a rule pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArgExpr {
    Nat(u64),
    Bool(bool),
    Var(VarId),
    Succ(Box<ArgExpr>),
    Not(Box<ArgExpr>),
    Atom(Symbol),
}

/// Index of a variable in its membrane's declaration list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectPattern {
    Atom(Symbol),
    Compound(Symbol, Vec<ArgExpr>),
    Seq(Vec<Symbol>),
}

impl ObjectPattern {
    pub fn is_delta(&self) -> bool {
        matches!(self, ObjectPattern::Atom(s) if s.as_str() == crate::model::DELTA)
    }

    pub fn vars(&self, out: &mut BTreeSet<VarId>) {
        fn arg_vars(a: &ArgExpr, out: &mut BTreeSet<VarId>) {
            match a {
                ArgExpr::Var(v) => {
                    out.insert(*v);
                }
                ArgExpr::Succ(x) | ArgExpr::Not(x) => arg_vars(x, out),
                _ => {}
            }
        }
        if let ObjectPattern::Compound(_, args) = self {
            for a in args {
                arg_vars(a, out);
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut v = BTreeSet::new();
        self.vars(&mut v);
        v.is_empty()
    }
}

/// A multiset of object patterns, kept as a sorted list with repetitions.
pub type PatternSoup = Vec<ObjectPattern>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RhsPart {
    Directed(PatternSoup, Target),
    Division(PatternSoup, PatternSoup),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Ev,
    Xev,
    Cev,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleDef {
    pub label: Label,
    pub kind: RuleKind,
    pub lhs: PatternSoup,
    pub rhs: Vec<RhsPart>,
    pub promoters: PatternSoup,
    pub inhibitors: PatternSoup,
    /// Whether a `without` clause was given (an empty one still counts).
    pub has_inhibitors: bool,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub sort: Sort,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembraneDef {
    pub name: MembraneName,
    pub vars: Vec<VarDecl>,
    pub rules: Vec<RuleDef>,
    /// Generator pairs `(higher, lower)` in declaration order.
    pub priorities: Vec<(Label, Label)>,
    pub line: usize,
}

impl MembraneDef {
    pub fn new(name: MembraneName) -> Self {
        MembraneDef {
            name,
            vars: Vec::new(),
            rules: Vec::new(),
            priorities: Vec::new(),
            line: 0,
        }
    }

    pub fn rule(&self, label: &Label) -> Option<&RuleDef> {
        self.rules.iter().find(|r| &r.label == label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.rules.iter().map(|r| &r.label)
    }

    /// Transitive closure of the priority relation as `higher -> {lower}`.
    pub fn priority_closure(&self) -> PriorityRelation {
        PriorityRelation::from_pairs(&self.priorities)
    }
}

/// A transitively closed priority relation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PriorityRelation {
    /// `above[r]` = every rule with strictly higher priority than `r`.
    above: BTreeMap<Label, BTreeSet<Label>>,
}

impl PriorityRelation {
    pub fn from_pairs(pairs: &[(Label, Label)]) -> Self {
        let mut above: BTreeMap<Label, BTreeSet<Label>> = BTreeMap::new();
        for (hi, lo) in pairs {
            above.entry(lo.clone()).or_default().insert(hi.clone());
        }
        // Closure by repeated propagation; relations are tiny.
        loop {
            let mut changed = false;
            let snapshot = above.clone();
            for his in above.values_mut() {
                let extra: Vec<Label> = his
                    .iter()
                    .filter_map(|h| snapshot.get(h))
                    .flatten()
                    .cloned()
                    .collect();
                for e in extra {
                    changed |= his.insert(e);
                }
            }
            if !changed {
                break;
            }
        }
        PriorityRelation { above }
    }

    pub fn is_empty(&self) -> bool {
        self.above.is_empty()
    }

    /// Rules with strictly higher priority than `r`.
    pub fn higher_than(&self, r: &Label) -> impl Iterator<Item = &Label> {
        self.above.get(r).into_iter().flatten()
    }

    pub fn greater(&self, hi: &Label, lo: &Label) -> bool {
        self.above.get(lo).is_some_and(|s| s.contains(hi))
    }

    pub fn has_higher(&self, r: &Label) -> bool {
        self.above.get(r).is_some_and(|s| !s.is_empty())
    }
}

/// A command line found at the top level of a specification file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandLine {
    pub text: String,
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SystemSpec {
    pub signature: Signature,
    /// Membranes in declaration order.
    pub membranes: Vec<MembraneDef>,
    pub priority_mode: PriorityMode,
    pub commands: Vec<CommandLine>,
}

impl SystemSpec {
    pub fn membrane(&self, name: &MembraneName) -> Option<&MembraneDef> {
        self.membranes.iter().find(|m| &m.name == name)
    }

    pub fn membrane_names(&self) -> impl Iterator<Item = &MembraneName> {
        self.membranes.iter().map(|m| &m.name)
    }
}

// Rendering back to the surface syntax, used by `show <M>`.

impl MembraneDef {
    fn var_name(&self, v: VarId) -> &str {
        self.vars.get(v.0).map(|d| d.name.as_str()).unwrap_or("?")
    }

    fn fmt_arg(&self, f: &mut fmt::Formatter<'_>, a: &ArgExpr) -> fmt::Result {
        match a {
            ArgExpr::Nat(n) => write!(f, "{n}"),
            ArgExpr::Bool(b) => write!(f, "{b}"),
            ArgExpr::Var(v) => f.write_str(self.var_name(*v)),
            ArgExpr::Succ(x) => {
                f.write_str("s(")?;
                self.fmt_arg(f, x)?;
                f.write_str(")")
            }
            ArgExpr::Not(x) => {
                f.write_str("not ")?;
                self.fmt_arg(f, x)
            }
            ArgExpr::Atom(s) => write!(f, "{s}"),
        }
    }

    fn fmt_pattern(&self, f: &mut fmt::Formatter<'_>, p: &ObjectPattern) -> fmt::Result {
        match p {
            ObjectPattern::Atom(s) => write!(f, "{s}"),
            ObjectPattern::Compound(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    self.fmt_arg(f, a)?;
                }
                f.write_str(")")
            }
            ObjectPattern::Seq(v) => {
                let parts: Vec<&str> = v.iter().map(Symbol::as_str).collect();
                write!(f, "{}", parts.join(&format!(" {SEQ_OP} ")))
            }
        }
    }

    fn fmt_soup(&self, f: &mut fmt::Formatter<'_>, s: &[ObjectPattern]) -> fmt::Result {
        if s.is_empty() {
            return f.write_str("empty");
        }
        for (i, p) in s.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let needs_parens = matches!(p, ObjectPattern::Seq(_)) && s.len() > 1;
            if needs_parens {
                f.write_str("(")?;
            }
            self.fmt_pattern(f, p)?;
            if needs_parens {
                f.write_str(")")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MembraneDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "membrane {} is", self.name)?;
        let mut by_sort: Vec<(Sort, Vec<&str>)> = Vec::new();
        for v in &self.vars {
            match by_sort.iter_mut().find(|(s, _)| *s == v.sort) {
                Some((_, names)) => names.push(&v.name),
                None => by_sort.push((v.sort, vec![&v.name])),
            }
        }
        for (sort, names) in by_sort {
            writeln!(f, "  var {} : {sort} .", names.join(" "))?;
        }
        for r in &self.rules {
            let kw = match r.kind {
                RuleKind::Ev => "ev",
                RuleKind::Xev => "xev",
                RuleKind::Cev => "cev",
            };
            write!(f, "  {kw} {} : ", r.label)?;
            self.fmt_soup(f, &r.lhs)?;
            f.write_str(" ->")?;
            if r.rhs.is_empty() {
                f.write_str(" empty")?;
            }
            for part in &r.rhs {
                f.write_str(" ")?;
                match part {
                    RhsPart::Directed(s, Target::Here) => self.fmt_soup(f, s)?,
                    RhsPart::Directed(s, t) => {
                        f.write_str("(")?;
                        self.fmt_soup(f, s)?;
                        write!(f, ", {t})")?;
                    }
                    RhsPart::Division(l, rr) => {
                        f.write_str("(")?;
                        self.fmt_soup(f, l)?;
                        f.write_str(", ")?;
                        self.fmt_soup(f, rr)?;
                        f.write_str(", div)")?;
                    }
                }
            }
            if !r.promoters.is_empty() {
                f.write_str(" with ")?;
                self.fmt_soup(f, &r.promoters)?;
            }
            if r.has_inhibitors {
                f.write_str(" without ")?;
                self.fmt_soup(f, &r.inhibitors)?;
            }
            writeln!(f, " .")?;
        }
        for (hi, lo) in &self.priorities {
            writeln!(f, "  pr {hi} > {lo} .")?;
        }
        f.write_str("end")
    }
}
