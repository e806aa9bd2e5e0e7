//! A finite domain `{1..n}` as a single term, with values excluded by
//! unification alone.
//!
//! `fd(0, V1, ..., Vn-1, 1)` holds one boundary per gap between values.
//! Excluding value `k` unifies the boundaries on either side of it; once every
//! value is gone the chain forces `0 = 1` and unification fails.

use thiserror::Error;

use crate::term::Term;
use crate::unify::unify;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DomainError {
    #[error("a domain needs at least one value")]
    Empty,
    #[error("value {value} is outside 1..={size}")]
    OutOfRange { value: usize, size: usize },
}

#[derive(Clone, Debug)]
pub struct FiniteDomain {
    size: usize,
    term: Option<Term>,
}

impl FiniteDomain {
    pub fn new(size: usize) -> Result<FiniteDomain, DomainError> {
        if size == 0 {
            return Err(DomainError::Empty);
        }
        let mut args = vec![Term::atom("0")];
        args.extend((1..size).map(|_| Term::var()));
        args.push(Term::atom("1"));
        Ok(FiniteDomain { size, term: Some(Term::app("fd", args)) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.size + 1
    }

    pub fn term(&self) -> Option<&Term> {
        self.term.as_ref()
    }

    /// Remove value `k` (1-based). Excluding from an empty domain keeps it empty.
    pub fn exclude(&mut self, k: usize) -> Result<(), DomainError> {
        if k == 0 || k > self.size {
            return Err(DomainError::OutOfRange { value: k, size: self.size });
        }
        let Some(t) = &self.term else { return Ok(()) };
        let args = t.args();
        self.term = unify(&args[k - 1], &args[k]).map(|s| s.apply(t));
        Ok(())
    }

    pub fn is_satisfiable(&self) -> bool {
        self.term.is_some()
    }
}

/// The template of a fresh `n`-valued domain.
pub fn bruteforce_encode(n: usize) -> Result<Term, DomainError> {
    Ok(FiniteDomain::new(n)?.term.expect("a fresh domain is satisfiable"))
}
