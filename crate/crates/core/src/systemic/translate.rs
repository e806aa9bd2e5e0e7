use crate::hierarchy::{DeclarationSet, SubtypeDecl};
use crate::lex::Span;

use super::{lift_disjunctions, Entry, Network, SystemicError};

/// One dimension per system and entering feature. A conjunctive entry puts
/// the same dimension under every conjunct, so its members inherit from all
/// of them.
pub fn translate(net: &Network) -> Result<DeclarationSet, SystemicError> {
    let mut out = DeclarationSet::default();
    for s in &net.systems {
        let parents = match &s.entry {
            Entry::All(fs) => fs,
            Entry::Any(fs) if fs.len() == 1 => fs,
            Entry::Any(_) => return Err(SystemicError::ResidualDisjunction { system: s.name.clone() }),
        };
        for p in parents {
            out.subtype_decls.push(SubtypeDecl {
                parent: p.clone(),
                dims: vec![s.alternatives.clone()],
                span: Span::default(),
            });
        }
    }
    Ok(out)
}

/// Lift every disjunctive entry, then translate.
pub fn network_to_declarations(net: &Network) -> DeclarationSet {
    translate(&lift_disjunctions(net).network).expect("lifting leaves no disjunctions")
}
