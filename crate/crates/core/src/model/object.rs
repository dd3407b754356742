use std::fmt;

use super::{MembraneName, Multiset, Symbol};

/// Name of the dissolution trigger object.
pub const DELTA: &str = "delta";

/// Separator used when rendering string objects.
pub const SEQ_OP: &str = "·";

/// A value in an argument position of a structured object.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Argument {
    Nat(u64),
    Bool(bool),
    Atom(Symbol),
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Argument::Nat(n) => write!(f, "{n}"),
            Argument::Bool(b) => write!(f, "{b}"),
            Argument::Atom(s) => write!(f, "{s}"),
        }
    }
}

/// An object of a membrane system.
///
/// Sequences are kept flat; a one-element sequence is stored as the
/// corresponding atom and an empty one as the identity atom. Build sequences
/// through [`Object::seq`] to keep that invariant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Object {
    Atom(Symbol),
    Compound(Symbol, Vec<Argument>),
    Seq(Vec<Symbol>),
}

impl Object {
    /// Display order: `delta`, then strings, compounds and atoms.
    fn rank(&self) -> u8 {
        match self {
            _ if self.is_delta() => 0,
            Object::Seq(_) => 1,
            Object::Compound(..) => 2,
            Object::Atom(_) => 3,
        }
    }

    pub fn atom(name: &str) -> Self {
        Object::Atom(Symbol::new(name))
    }

    pub fn delta() -> Self {
        Object::atom(DELTA)
    }

    pub fn is_delta(&self) -> bool {
        matches!(self, Object::Atom(s) if s.as_str() == DELTA)
    }

    /// Normalizing constructor for string objects. Occurrences of the
    /// identity atom are dropped.
    pub fn seq(atoms: Vec<Symbol>, identity: Option<&Symbol>) -> Self {
        let mut atoms: Vec<Symbol> = match identity {
            Some(id) => atoms.into_iter().filter(|a| a != id).collect(),
            None => atoms,
        };
        match atoms.len() {
            0 => Object::Atom(
                identity
                    .cloned()
                    .unwrap_or_else(|| Symbol::new("eps")),
            ),
            1 => Object::Atom(atoms.pop().unwrap()),
            _ => Object::Seq(atoms),
        }
    }

    /// The object viewed as a string of atoms, when it is one. Atoms are
    /// strings of length one.
    pub fn as_string(&self) -> Option<&[Symbol]> {
        match self {
            Object::Atom(s) => Some(std::slice::from_ref(s)),
            Object::Seq(v) => Some(v),
            Object::Compound(..) => None,
        }
    }
}

impl Ord for Object {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank()).then_with(|| match (self, other) {
            (Object::Atom(a), Object::Atom(b)) => a.cmp(b),
            (Object::Compound(f, x), Object::Compound(g, y)) => (f, x).cmp(&(g, y)),
            (Object::Seq(a), Object::Seq(b)) => a.cmp(b),
            _ => std::cmp::Ordering::Equal,
        })
    }
}

impl PartialOrd for Object {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Atom(s) => write!(f, "{s}"),
            Object::Compound(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Object::Seq(atoms) => {
                f.write_str("(")?;
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " {SEQ_OP} ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Destination of the products of a rule.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Target {
    Here,
    Out,
    In(MembraneName),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Here => f.write_str("here"),
            Target::Out => f.write_str("out"),
            Target::In(m) => write!(f, "in {m}"),
        }
    }
}

/// Products of a rule that are not yet delivered. Their payload is frozen
/// until the evolution step finishes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum TargetMessage {
    Directed {
        payload: Multiset<Object>,
        target: Target,
    },
    Division {
        left: Multiset<Object>,
        right: Multiset<Object>,
    },
}

impl TargetMessage {
    pub fn object_count(&self) -> usize {
        match self {
            TargetMessage::Directed { payload, .. } => payload.len(),
            TargetMessage::Division { left, right } => left.len() + right.len(),
        }
    }
}

pub(crate) fn fmt_objects(f: &mut fmt::Formatter<'_>, objs: &Multiset<Object>) -> fmt::Result {
    if objs.is_empty() {
        return f.write_str("empty");
    }
    for (i, o) in objs.iter_expanded().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{o}")?;
    }
    Ok(())
}

impl fmt::Display for TargetMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetMessage::Directed { payload, target } => {
                f.write_str("(")?;
                fmt_objects(f, payload)?;
                write!(f, ", {target})")
            }
            TargetMessage::Division { left, right } => {
                f.write_str("(")?;
                fmt_objects(f, left)?;
                f.write_str(", ")?;
                fmt_objects(f, right)?;
                f.write_str(", div)")
            }
        }
    }
}
