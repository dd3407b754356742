//! Objects, multisets, membranes and configurations.
//!
//! Every value here is immutable once built and canonical by construction,
//! so configurations can be hashed and compared directly for state
//! deduplication.

mod multiset;
mod object;
mod soup;
mod symbol;

pub use multiset::Multiset;
pub use object::{Argument, Object, Target, TargetMessage, DELTA, SEQ_OP};
pub use soup::{
    canonicalize, count_submultiset, soup_contains, AppliedMultiset, Configuration, EmptyPattern,
    Membrane, Soup,
};
pub use symbol::{Label, MembraneName, Symbol};
