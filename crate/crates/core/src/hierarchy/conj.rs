use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeName(String);

impl TypeName {
    pub fn new(name: impl Into<String>) -> TypeName {
        TypeName(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for TypeName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// A set of type names read as the intersection of their denotations.
///
/// Only [`Hierarchy::normalize`](super::Hierarchy::normalize) and the
/// algebra operations produce normalized conjunctions; values built with
/// [`TypeConj::from_names`] or [`TypeConj::parse`] are raw.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeConj {
    members: BTreeSet<TypeName>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ConjParseError {
    #[error("empty type conjunction")]
    Empty,
    #[error("invalid type name `{0}` in conjunction")]
    BadName(String),
}

impl TypeConj {
    pub fn from_names<'a>(names: impl IntoIterator<Item = &'a str>) -> TypeConj {
        TypeConj { members: names.into_iter().map(TypeName::new).collect() }
    }

    /// Parse `t1 & t2 & ...`; whitespace is ignored.
    pub fn parse(text: &str) -> Result<TypeConj, ConjParseError> {
        if text.trim().is_empty() {
            return Err(ConjParseError::Empty);
        }
        let mut members = BTreeSet::new();
        for part in text.split('&') {
            let name = part.trim();
            let mut chars = name.chars();
            let ok = chars.next().is_some_and(|c| c.is_ascii_lowercase())
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(ConjParseError::BadName(name.to_string()));
            }
            members.insert(TypeName::new(name));
        }
        Ok(TypeConj { members })
    }

    pub fn iter(&self) -> impl Iterator<Item = &TypeName> {
        self.members.iter()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.members.contains(name)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self, other: &TypeConj) -> TypeConj {
        TypeConj { members: self.members.union(&other.members).cloned().collect() }
    }
}

impl fmt::Display for TypeConj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            f.write_str(m.as_str())?;
        }
        Ok(())
    }
}
