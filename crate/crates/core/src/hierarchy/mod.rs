//! Multi-dimensional type hierarchies and their open-world type algebra.
//!
//! A declaration `x > [a,b] * [c,d].` gives `x` two dimensions. Members of one
//! dimension are pairwise disjoint subtypes of the parent; types from different
//! dimensions may be freely combined. A type listed under several parents
//! inherits from all of them.

mod conj;
pub mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use self::conj::{ConjParseError, TypeConj, TypeName};
pub use self::parse::{parse_declarations, DeclarationSet, FeatureSpec, SubtypeDecl};
use crate::lex::{Span, SyntaxError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimId(pub usize);

/// One bracketed member list under a parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dimension {
    pub parent: TypeId,
    pub members: Vec<TypeId>,
    /// Position among the parent's dimensions.
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// `ty` was listed under both `dropped` and its descendant `kept`; the
    /// edge from `dropped` adds nothing and was removed.
    RedundantParent { ty: String, dropped: String, kept: String, span: Span },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::RedundantParent { ty, dropped, kept, span } => write!(
                f,
                "{span}: warning: `{ty}` is declared under `{dropped}` and under its subtype `{kept}`; dropping the edge from `{dropped}`"
            ),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HierarchyError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{span}: `{ty}` appears in two dimensions of `{parent}`")]
    DuplicateMembership { ty: String, parent: String, span: Span },
    #[error("{span}: subtype cycle {}", path.join(" > "))]
    Cycle { path: Vec<String>, span: Span },
    #[error("{span}: hierarchy has several root types: {}", roots.join(", "))]
    MultipleRoots { roots: Vec<String>, span: Span },
    #[error("hierarchy has no root type")]
    NoRoot,
    #[error("{span}: `{ty}` inherits from disjoint types `{a}` and `{b}`")]
    InconsistentParents { ty: String, a: String, b: String, span: Span },
    #[error("unknown type `{0}`")]
    UnknownType(String),
}

impl HierarchyError {
    pub fn span(&self) -> Option<Span> {
        match self {
            HierarchyError::Syntax(e) => Some(e.span),
            HierarchyError::DuplicateMembership { span, .. }
            | HierarchyError::Cycle { span, .. }
            | HierarchyError::MultipleRoots { span, .. }
            | HierarchyError::InconsistentParents { span, .. } => Some(*span),
            HierarchyError::NoRoot | HierarchyError::UnknownType(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
struct TypeEntry {
    name: TypeName,
    dims: Vec<DimId>,
    parents: Vec<(DimId, usize)>,
    /// Sorted ids of the type and all its ancestors.
    closure: Vec<TypeId>,
    span: Span,
}

/// A validated hierarchy. Immutable once built.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    types: Vec<TypeEntry>,
    dims: Vec<Dimension>,
    index: HashMap<String, TypeId>,
    root: TypeId,
    topo: Vec<TypeId>,
    warnings: Vec<Warning>,
}

/// Structural equality by type name: same root, same types, and each type
/// has the same dimensions in the same order with the same member lists.
impl PartialEq for Hierarchy {
    fn eq(&self, other: &Hierarchy) -> bool {
        fn shape(h: &Hierarchy) -> BTreeMap<&str, Vec<Vec<&str>>> {
            h.type_ids()
                .map(|t| {
                    let dims = h
                        .dims_of(t)
                        .iter()
                        .map(|&d| h.dimension(d).members.iter().map(|&m| h.name(m).as_str()).collect())
                        .collect();
                    (h.name(t).as_str(), dims)
                })
                .collect()
        }
        self.name(self.root) == other.name(other.root) && shape(self) == shape(other)
    }
}

impl Eq for Hierarchy {}

pub fn build_hierarchy(decls: &DeclarationSet) -> Result<Hierarchy, HierarchyError> {
    let mut names: Vec<String> = Vec::new();
    let mut spans: Vec<Span> = Vec::new();
    let mut index: HashMap<String, TypeId> = HashMap::new();
    let mut intern = |name: &str, span: Span, names: &mut Vec<String>, spans: &mut Vec<Span>| -> TypeId {
        *index.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            spans.push(span);
            TypeId(names.len() - 1)
        })
    };

    // (parent, members, span) in declaration order
    let mut raw: Vec<(TypeId, Vec<TypeId>, Span)> = Vec::new();
    for decl in &decls.subtype_decls {
        let parent = intern(&decl.parent, decl.span, &mut names, &mut spans);
        for dim in &decl.dims {
            let members = dim.iter().map(|m| intern(m, decl.span, &mut names, &mut spans)).collect();
            raw.push((parent, members, decl.span));
        }
    }
    if names.is_empty() {
        return Err(HierarchyError::NoRoot);
    }
    let n = names.len();

    for (i, (parent, members, span)) in raw.iter().enumerate() {
        for m in members {
            let again = raw[..i].iter().any(|(p, ms, _)| p == parent && ms.contains(m));
            if again {
                return Err(HierarchyError::DuplicateMembership {
                    ty: names[m.0].clone(),
                    parent: names[parent.0].clone(),
                    span: *span,
                });
            }
        }
    }

    let mut children: Vec<Vec<TypeId>> = vec![Vec::new(); n];
    let mut parents: Vec<Vec<TypeId>> = vec![Vec::new(); n];
    for (p, ms, _) in &raw {
        for m in ms {
            children[p.0].push(*m);
            parents[m.0].push(*p);
        }
    }
    if let Some(cycle) = find_cycle(&children) {
        // the declaration that closes the loop
        let (from, to) = (cycle[cycle.len() - 2], cycle[cycle.len() - 1]);
        let span = raw.iter().find(|(p, ms, _)| *p == from && ms.contains(&to)).map_or(spans[to.0], |(_, _, s)| *s);
        return Err(HierarchyError::Cycle { path: cycle.iter().map(|t| names[t.0].clone()).collect(), span });
    }
    let roots: Vec<TypeId> = (0..n).map(TypeId).filter(|t| parents[t.0].is_empty()).collect();
    let root = match roots.as_slice() {
        [] => return Err(HierarchyError::NoRoot),
        [r] => *r,
        [_, second, ..] => {
            return Err(HierarchyError::MultipleRoots {
                roots: roots.iter().map(|t| names[t.0].clone()).collect(),
                span: spans[second.0],
            })
        }
    };
    let topo = topo_order(&parents, &children);
    let closures = closures(&topo, &parents);

    // Drop parent edges subsumed by another parent of the same type.
    let mut warnings = Vec::new();
    for t in 0..n {
        let ps = &parents[t];
        for &p in ps {
            if let Some(&q) = ps.iter().find(|&&q| q != p && closures[q.0].binary_search(&p).is_ok()) {
                let (_, members, span) = raw
                    .iter_mut()
                    .find(|(parent, ms, _)| *parent == p && ms.contains(&TypeId(t)))
                    .expect("edge comes from a declaration");
                members.retain(|m| m.0 != t);
                warnings.push(Warning::RedundantParent {
                    ty: names[t].clone(),
                    dropped: names[p.0].clone(),
                    kept: names[q.0].clone(),
                    span: *span,
                });
            }
        }
    }
    raw.retain(|(_, ms, _)| !ms.is_empty());

    let mut types: Vec<TypeEntry> = names
        .into_iter()
        .zip(spans)
        .zip(closures)
        .map(|((name, span), closure)| TypeEntry {
            name: TypeName::new(name),
            dims: Vec::new(),
            parents: Vec::new(),
            closure,
            span,
        })
        .collect();
    let mut dims = Vec::new();
    for (parent, members, _) in raw {
        let id = DimId(dims.len());
        let index = types[parent.0].dims.len();
        types[parent.0].dims.push(id);
        for (pos, m) in members.iter().enumerate() {
            types[m.0].parents.push((id, pos));
        }
        dims.push(Dimension { parent, members, index });
    }

    let h = Hierarchy { types, dims, index, root, topo, warnings };

    for t in h.type_ids() {
        if let Some((a, b)) = h.clash(&[t]) {
            return Err(HierarchyError::InconsistentParents {
                ty: h.name(t).to_string(),
                a: h.name(a).to_string(),
                b: h.name(b).to_string(),
                span: h.types[t.0].span,
            });
        }
    }
    Ok(h)
}

fn find_cycle(children: &[Vec<TypeId>]) -> Option<Vec<TypeId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    fn visit(t: TypeId, children: &[Vec<TypeId>], marks: &mut [Mark], stack: &mut Vec<TypeId>) -> Option<Vec<TypeId>> {
        marks[t.0] = Mark::Open;
        stack.push(t);
        for &c in &children[t.0] {
            match marks[c.0] {
                Mark::Open => {
                    let start = stack.iter().position(|&s| s == c).unwrap();
                    let mut cycle = stack[start..].to_vec();
                    cycle.push(c);
                    return Some(cycle);
                }
                Mark::New => {
                    if let Some(cycle) = visit(c, children, marks, stack) {
                        return Some(cycle);
                    }
                }
                Mark::Done => {}
            }
        }
        stack.pop();
        marks[t.0] = Mark::Done;
        None
    }
    let mut marks = vec![Mark::New; children.len()];
    for t in 0..children.len() {
        if marks[t] == Mark::New {
            if let Some(c) = visit(TypeId(t), children, &mut marks, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}

/// Parents before children; ties broken by id.
fn topo_order(parents: &[Vec<TypeId>], children: &[Vec<TypeId>]) -> Vec<TypeId> {
    let mut pending: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut ready: BTreeSet<TypeId> = (0..parents.len()).filter(|&t| pending[t] == 0).map(TypeId).collect();
    let mut order = Vec::with_capacity(parents.len());
    while let Some(t) = ready.pop_first() {
        order.push(t);
        for c in &children[t.0] {
            pending[c.0] -= 1;
            if pending[c.0] == 0 {
                ready.insert(*c);
            }
        }
    }
    order
}

fn closures(topo: &[TypeId], parents: &[Vec<TypeId>]) -> Vec<Vec<TypeId>> {
    let mut out: Vec<Vec<TypeId>> = vec![Vec::new(); parents.len()];
    for &t in topo {
        let mut set: BTreeSet<TypeId> = BTreeSet::from([t]);
        for p in &parents[t.0] {
            set.extend(out[p.0].iter().copied());
        }
        out[t.0] = set.into_iter().collect();
    }
    out
}

impl Hierarchy {
    pub fn from_text(text: &str) -> Result<Hierarchy, HierarchyError> {
        build_hierarchy(&parse_declarations(text)?)
    }

    pub fn type_count(&self) -> usize {
        self.types.len()
    }

    pub fn type_ids(&self) -> impl Iterator<Item = TypeId> + '_ {
        (0..self.types.len()).map(TypeId)
    }

    pub fn type_names(&self) -> impl Iterator<Item = &TypeName> + '_ {
        self.types.iter().map(|t| &t.name)
    }

    pub fn id(&self, name: &str) -> Option<TypeId> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<TypeId, HierarchyError> {
        self.id(name).ok_or_else(|| HierarchyError::UnknownType(name.to_string()))
    }

    pub fn name(&self, t: TypeId) -> &TypeName {
        &self.types[t.0].name
    }

    pub fn root(&self) -> TypeId {
        self.root
    }

    pub fn dims(&self) -> &[Dimension] {
        &self.dims
    }

    pub fn dimension(&self, d: DimId) -> &Dimension {
        &self.dims[d.0]
    }

    /// Dimensions declared on `t`, in declaration order.
    pub fn dims_of(&self, t: TypeId) -> &[DimId] {
        &self.types[t.0].dims
    }

    /// Dimensions `t` is a member of, with its position in each.
    pub fn parents_of(&self, t: TypeId) -> &[(DimId, usize)] {
        &self.types[t.0].parents
    }

    pub fn parent_types(&self, t: TypeId) -> impl Iterator<Item = TypeId> + '_ {
        self.types[t.0].parents.iter().map(|(d, _)| self.dims[d.0].parent)
    }

    /// Parents before children.
    pub fn topo_order(&self) -> &[TypeId] {
        &self.topo
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub fn declaration_span(&self, t: TypeId) -> Span {
        self.types[t.0].span
    }

    /// The type and all its ancestors, as sorted ids.
    pub fn closure_ids(&self, t: TypeId) -> &[TypeId] {
        &self.types[t.0].closure
    }

    pub fn is_ancestor_or_self(&self, ancestor: TypeId, t: TypeId) -> bool {
        self.types[t.0].closure.binary_search(&ancestor).is_ok()
    }

    pub fn up_closure(&self, t: &str) -> Result<BTreeSet<TypeName>, HierarchyError> {
        let id = self.lookup(t)?;
        Ok(self.closure_ids(id).iter().map(|&a| self.name(a).clone()).collect())
    }

    pub fn down_closure(&self, t: &str) -> Result<BTreeSet<TypeName>, HierarchyError> {
        let id = self.lookup(t)?;
        Ok(self.type_ids().filter(|&d| self.is_ancestor_or_self(id, d)).map(|d| self.name(d).clone()).collect())
    }

    pub fn conj_ids(&self, c: &TypeConj) -> Result<Vec<TypeId>, HierarchyError> {
        c.iter().map(|n| self.lookup(n.as_str())).collect()
    }

    /// First pair of distinct co-members of one dimension found in the union
    /// of the closures of `ts`, if any.
    pub fn clash(&self, ts: &[TypeId]) -> Option<(TypeId, TypeId)> {
        let mut chosen: HashMap<DimId, TypeId> = HashMap::new();
        let mut all: BTreeSet<TypeId> = BTreeSet::new();
        for t in ts {
            all.extend(self.closure_ids(*t).iter().copied());
        }
        for x in all {
            for (d, _) in self.parents_of(x) {
                match chosen.insert(*d, x) {
                    Some(y) if y != x => return Some((y, x)),
                    _ => {}
                }
            }
        }
        None
    }

    pub fn consistent_ids(&self, ts: &[TypeId]) -> bool {
        self.clash(ts).is_none()
    }

    pub fn consistent(&self, c: &TypeConj) -> Result<bool, HierarchyError> {
        Ok(self.consistent_ids(&self.conj_ids(c)?))
    }

    /// Drop members that are ancestors of other members. The empty
    /// conjunction normalizes to the root.
    pub fn normalize(&self, c: &TypeConj) -> Result<TypeConj, HierarchyError> {
        let ids = self.conj_ids(c)?;
        Ok(self.normalize_ids(&ids))
    }

    pub fn normalize_ids(&self, ids: &[TypeId]) -> TypeConj {
        let keep: Vec<TypeId> =
            ids.iter().copied().filter(|&a| !ids.iter().any(|&b| b != a && self.is_ancestor_or_self(a, b))).collect();
        if keep.is_empty() {
            TypeConj::from_names([self.name(self.root).as_str()])
        } else {
            TypeConj::from_names(keep.iter().map(|&t| self.name(t).as_str()))
        }
    }

    /// Conjunction of `a` and `b`, or `None` if they are disjoint.
    pub fn conjoin(&self, a: &TypeConj, b: &TypeConj) -> Result<Option<TypeConj>, HierarchyError> {
        let mut ids = self.conj_ids(a)?;
        ids.extend(self.conj_ids(b)?);
        if !self.consistent_ids(&ids) {
            return Ok(None);
        }
        Ok(Some(self.normalize_ids(&ids)))
    }

    /// `a` subsumes `b` when every member of `a` is an ancestor-or-self of some member of `b`.
    pub fn subsumes(&self, a: &TypeConj, b: &TypeConj) -> Result<bool, HierarchyError> {
        let (xs, ys) = (self.conj_ids(a)?, self.conj_ids(b)?);
        Ok(xs.iter().all(|&x| x == self.root || ys.iter().any(|&y| self.is_ancestor_or_self(x, y))))
    }
}

#[cfg(test)]
mod tests;
