//! Systemic classification networks and their translation into
//! multi-dimensional type hierarchies.

mod bruteforce;
mod count;
mod lift;
mod network;
mod translate;

use thiserror::Error;

use crate::lex::{Span, SyntaxError};

pub use bruteforce::{bruteforce_encode, DomainError, FiniteDomain};
pub use count::count_possibilities;
pub use lift::{lift_disjunctions, LiftedNetwork, LiftedPair};
pub use network::{parse_network, Entry, Network, System};
pub use translate::{network_to_declarations, translate};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SystemicError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("network has no `root` statement")]
    MissingRoot,
    #[error("{span}: system `{system}` is declared twice")]
    DuplicateSystem { system: String, span: Span },
    #[error("{span}: system `{system}` already has an entry condition")]
    DuplicateEntry { system: String, span: Span },
    #[error("{span}: feature `{feature}` is an alternative of more than one system")]
    DuplicateAlternative { feature: String, span: Span },
    #[error("{span}: entry condition for undeclared system `{system}`")]
    UnknownSystem { system: String, span: Span },
    #[error("{span}: unknown feature `{feature}`")]
    UnknownFeature { feature: String, span: Span },
    #[error("{span}: `{name}` is used both as a system and as a feature")]
    NameClash { name: String, span: Span },
    #[error("{span}: system `{name}` can never be entered")]
    Unreachable { name: String, span: Span },
    #[error("system `{system}` still has a disjunctive entry condition; lift it first")]
    ResidualDisjunction { system: String },
}

impl SystemicError {
    pub fn span(&self) -> Option<Span> {
        match self {
            SystemicError::Syntax(e) => Some(e.span),
            SystemicError::DuplicateSystem { span, .. }
            | SystemicError::DuplicateEntry { span, .. }
            | SystemicError::DuplicateAlternative { span, .. }
            | SystemicError::UnknownSystem { span, .. }
            | SystemicError::UnknownFeature { span, .. }
            | SystemicError::NameClash { span, .. }
            | SystemicError::Unreachable { span, .. } => Some(*span),
            SystemicError::MissingRoot | SystemicError::ResidualDisjunction { .. } => None,
        }
    }
}
