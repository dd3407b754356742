//! The membrane specification language, configuration terms and the
//! temporal formula language.

pub mod ast;
pub mod formula;
mod lexer;
mod parser;
mod validate;

use std::fmt;

pub use ast::{
    ArgExpr, CommandLine, MembraneDef, ObjectPattern, PatternSoup, PriorityMode, PriorityRelation,
    RhsPart, RuleDef, RuleKind, Signature, SignatureDecl, Sort, SystemSpec, VarDecl, VarId,
};
pub use formula::{parse_formula, BoolExpr, Formula, Layer, NatExpr, Prop, Relation};
pub use parser::{parse_configuration, parse_spec, parse_spec_unchecked};
pub(crate) use parser::TERM_COMMANDS;
pub use validate::validate_spec;

/// A located message about malformed input. Lines and columns are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for Diagnostic {}
