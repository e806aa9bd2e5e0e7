//! Multi-dimensional type hierarchies over typed feature structures.
//!
//! Types are declared with `x > [a,b] * [c,d].`: each bracketed list is a
//! dimension of mutually exclusive subtypes, and types from different
//! dimensions combine freely (open world). Each type compiles to a term
//! template so that conjoining types is ordinary first-order unification.

pub mod cli;
pub mod encoder;
pub mod features;
pub mod fixtures;
pub mod hierarchy;
pub mod lex;
pub mod oracle;
pub mod systemic;
pub mod term;
pub mod unify;

pub use encoder::EncodingTable;
pub use hierarchy::{Hierarchy, TypeConj, TypeName};
pub use term::Term;
