//! Compilation of a hierarchy into per-type term templates.
//!
//! Layout of a type's node: one argument per dimension declared on the type,
//! then one per feature it introduces, then (in feature-structure mode, root
//! node only) a trailing equality variable. A type with no arguments is an
//! atom. A subtype's node sits in its parent's dimension slot; a type listed
//! under several parents occurs once per parent, and only the leftmost
//! occurrence (depth-first, left to right) carries its own node. The other
//! occurrences are bare atoms.

use std::fmt;

use thiserror::Error;

use crate::features::FeatureSet;
use crate::hierarchy::{Hierarchy, HierarchyError, TypeConj, TypeId};
pub use crate::term::{symbol_count, Term};
use crate::unify::{matches, unify_all};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Type information only, as in the printed type tables.
    Plain,
    /// Feature slots and an equality slot are laid out.
    FeatureStructure,
}

/// Argument layout of one type's node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSpec {
    /// Path of argument indices from the root to the carrier occurrence.
    pub carrier_path: Vec<usize>,
    /// Every occurrence site, sorted; the first is the carrier.
    pub occurrences: Vec<Vec<usize>>,
    pub dim_slots: usize,
    pub features: Vec<String>,
    pub equality_slot: bool,
}

impl NodeSpec {
    pub fn arity(&self) -> usize {
        self.dim_slots + self.features.len() + usize::from(self.equality_slot)
    }

    /// Argument index of feature `f` within this node.
    pub fn feature_slot(&self, f: &str) -> Option<usize> {
        self.features.iter().position(|g| g == f).map(|i| self.dim_slots + i)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error("inconsistent conjunction `{0}`")]
    Inconsistent(TypeConj),
    #[error("`{0}` is not an instance of the root template")]
    NotAnInstance(String),
}

/// Per-type templates for one hierarchy. Immutable after compilation.
#[derive(Clone, Debug)]
pub struct EncodingTable {
    hierarchy: Hierarchy,
    features: FeatureSet,
    mode: Mode,
    nodes: Vec<NodeSpec>,
    templates: Vec<Term>,
}

impl EncodingTable {
    pub fn compile(h: &Hierarchy) -> EncodingTable {
        Self::build(h, FeatureSet::empty(), Mode::Plain)
    }

    /// Feature-structure mode: feature slots and the root equality slot are present.
    pub fn compile_with_features(h: &Hierarchy, features: &FeatureSet) -> EncodingTable {
        Self::build(h, features.clone(), Mode::FeatureStructure)
    }

    fn build(h: &Hierarchy, features: FeatureSet, mode: Mode) -> EncodingTable {
        let n = h.type_count();
        let mut nodes: Vec<Option<NodeSpec>> = vec![None; n];
        for &t in h.topo_order() {
            let mut occurrences: Vec<Vec<usize>> = h
                .parents_of(t)
                .iter()
                .map(|(d, _)| {
                    let dim = h.dimension(*d);
                    let mut p = nodes[dim.parent.0].as_ref().expect("parents first").carrier_path.clone();
                    p.push(dim.index);
                    p
                })
                .collect();
            occurrences.sort();
            let carrier_path = occurrences.first().cloned().unwrap_or_default();
            nodes[t.0] = Some(NodeSpec {
                carrier_path,
                occurrences,
                dim_slots: h.dims_of(t).len(),
                features: features.introduced_at(h.name(t).as_str()).map(|f| f.feature.clone()).collect(),
                equality_slot: mode == Mode::FeatureStructure && t == h.root(),
            });
        }
        let nodes: Vec<NodeSpec> = nodes.into_iter().map(|n| n.expect("every type visited")).collect();
        let mut table = EncodingTable { hierarchy: h.clone(), features, mode, nodes, templates: Vec::new() };
        table.templates = h.type_ids().map(|t| table.build_template(t)).collect();
        table
    }

    fn build_template(&self, t: TypeId) -> Term {
        let h = &self.hierarchy;
        let mut present = vec![false; h.type_count()];
        for a in h.closure_ids(t) {
            present[a.0] = true;
        }
        self.build_node(h.root(), &present)
    }

    fn build_node(&self, u: TypeId, present: &[bool]) -> Term {
        let h = &self.hierarchy;
        let spec = &self.nodes[u.0];
        let name = h.name(u).as_str();
        if spec.arity() == 0 {
            return Term::atom(name);
        }
        let mut args = Vec::with_capacity(spec.arity());
        for (i, d) in h.dims_of(u).iter().enumerate() {
            let slot = h.dimension(*d).members.iter().find(|m| present[m.0]).map(|&m| {
                let carried_here = self.nodes[m.0].carrier_path.len() == spec.carrier_path.len() + 1
                    && self.nodes[m.0].carrier_path.starts_with(&spec.carrier_path)
                    && self.nodes[m.0].carrier_path.last() == Some(&i);
                if carried_here {
                    self.build_node(m, present)
                } else {
                    Term::atom(h.name(m).as_str())
                }
            });
            args.push(slot.unwrap_or_else(Term::var));
        }
        args.extend((0..spec.features.len() + usize::from(spec.equality_slot)).map(|_| Term::var()));
        Term::app(name, args)
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        &self.hierarchy
    }

    pub fn features(&self) -> &FeatureSet {
        &self.features
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn node(&self, t: TypeId) -> &NodeSpec {
        &self.nodes[t.0]
    }

    /// Template of `t` with fresh variables.
    pub fn template_of(&self, t: TypeId) -> Term {
        self.templates[t.0].rename_apart()
    }

    pub fn template(&self, name: &str) -> Result<Term, EncodeError> {
        Ok(self.template_of(self.hierarchy.lookup(name)?))
    }

    /// Unification of the members' templates.
    pub fn encode(&self, c: &TypeConj) -> Result<Term, EncodeError> {
        let ids = self.hierarchy.conj_ids(c)?;
        self.encode_ids(&ids).ok_or_else(|| EncodeError::Inconsistent(c.clone()))
    }

    pub fn encode_ids(&self, ids: &[TypeId]) -> Option<Term> {
        if ids.is_empty() {
            return Some(self.template_of(self.hierarchy.root()));
        }
        let terms: Vec<Term> = ids.iter().map(|&t| self.template_of(t)).collect();
        unify_all(&terms)
    }

    /// The most specific types whose templates subsume `t`.
    pub fn decode(&self, t: &Term) -> Result<TypeConj, EncodeError> {
        if !matches(&self.templates[self.hierarchy.root().0], t) {
            return Err(EncodeError::NotAnInstance(t.to_string()));
        }
        let ids: Vec<TypeId> = self.hierarchy.type_ids().filter(|x| matches(&self.templates[x.0], t)).collect();
        Ok(self.hierarchy.normalize_ids(&ids))
    }

    /// Copy of the table where functor `from` is spelled `to` in every
    /// template. Used for fault injection against the oracle.
    pub fn with_renamed_functor(&self, from: &str, to: &str) -> EncodingTable {
        let mut t = self.clone();
        t.templates = t.templates.iter().map(|x| x.rename_functor(from, to)).collect();
        t
    }

    pub fn max_arity(&self) -> usize {
        self.nodes.iter().map(NodeSpec::arity).max().unwrap_or(0)
    }
}

/// `compile_encoding` in one call from a hierarchy and validated features.
pub fn compile_encoding(h: &Hierarchy, features: &FeatureSet) -> EncodingTable {
    if features.is_empty() {
        EncodingTable::compile(h)
    } else {
        EncodingTable::compile_with_features(h, features)
    }
}

/// Per-type statistics for reporting.
pub struct TypeStats<'a> {
    pub name: &'a str,
    pub arity: usize,
    pub symbols: usize,
    pub template: Term,
}

impl fmt::Display for TypeStats<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\tarity={}\tsymbols={}\t{}", self.name, self.arity, self.symbols, self.template)
    }
}

impl EncodingTable {
    pub fn stats(&self) -> Vec<TypeStats<'_>> {
        self.hierarchy
            .type_ids()
            .map(|t| {
                let template = self.template_of(t);
                TypeStats {
                    name: self.hierarchy.name(t).as_str(),
                    arity: self.nodes[t.0].arity(),
                    symbols: symbol_count(&template),
                    template,
                }
            })
            .collect()
    }
}
