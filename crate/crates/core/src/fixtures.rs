//! Bundled example inputs.

/// The clause-type hierarchy cross-classified by phrase type and clause type.
pub const HPSG_DECL: &str = include_str!("../data/hpsg.decl");

/// The English pronoun classification network.
pub const PRONOUN_NET: &str = include_str!("../data/pronoun.sysnet");
