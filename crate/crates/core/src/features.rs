//! Feature declarations and typed feature structures over encoded terms.
//!
//! A feature is introduced at exactly one type and is appropriate for that
//! type and all its subtypes. Its value is restricted by a type conjunction.
//! Feature structures are terms compiled in feature-structure mode, so
//! building and unifying them is plain term unification. Each structure's
//! root node ends in an equality variable; two nodes are token-identical
//! exactly when they share it.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::encoder::{EncodeError, EncodingTable, Mode};
use crate::hierarchy::{FeatureSpec, Hierarchy, HierarchyError, TypeConj, TypeName};
use crate::lex::Span;
use crate::term::{Term, Var};
use crate::unify::{unify, Substitution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureDecl {
    pub feature: String,
    pub introduced_at: TypeName,
    pub restriction: TypeConj,
}

/// Validated feature declarations in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureSet {
    decls: Vec<FeatureDecl>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("{span}: feature `{feature}` is already introduced at `{first}`")]
    Duplicate { feature: String, first: String, span: Span },
    #[error("{span}: unknown type `{name}`")]
    UnknownType { name: String, span: Span },
    #[error("{span}: restriction `{restriction}` of feature `{feature}` is inconsistent")]
    InconsistentRestriction { feature: String, restriction: TypeConj, span: Span },
}

impl FeatureError {
    pub fn span(&self) -> Span {
        match self {
            FeatureError::Duplicate { span, .. }
            | FeatureError::UnknownType { span, .. }
            | FeatureError::InconsistentRestriction { span, .. } => *span,
        }
    }
}

pub fn validate_features(h: &Hierarchy, specs: &[FeatureSpec]) -> Result<FeatureSet, FeatureError> {
    let mut decls: Vec<FeatureDecl> = Vec::new();
    for spec in specs {
        if let Some(prev) = decls.iter().find(|d| d.feature == spec.feature) {
            return Err(FeatureError::Duplicate {
                feature: spec.feature.clone(),
                first: prev.introduced_at.to_string(),
                span: spec.span,
            });
        }
        for name in std::iter::once(&spec.introduced_at).chain(&spec.restriction) {
            if h.id(name).is_none() {
                return Err(FeatureError::UnknownType { name: name.clone(), span: spec.span });
            }
        }
        let restriction = TypeConj::from_names(spec.restriction.iter().map(String::as_str));
        if !h.consistent(&restriction).expect("names checked above") {
            return Err(FeatureError::InconsistentRestriction {
                feature: spec.feature.clone(),
                restriction,
                span: spec.span,
            });
        }
        decls.push(FeatureDecl {
            feature: spec.feature.clone(),
            introduced_at: TypeName::new(spec.introduced_at.clone()),
            restriction: h.normalize(&restriction).expect("names checked above"),
        });
    }
    Ok(FeatureSet { decls })
}

impl FeatureSet {
    pub fn empty() -> FeatureSet {
        FeatureSet::default()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FeatureDecl> {
        self.decls.iter()
    }

    pub fn get(&self, feature: &str) -> Option<&FeatureDecl> {
        self.decls.iter().find(|d| d.feature == feature)
    }

    /// Features introduced at `ty`, in declaration order.
    pub fn introduced_at<'a>(&'a self, ty: &'a str) -> impl Iterator<Item = &'a FeatureDecl> + 'a {
        self.decls.iter().filter(move |d| d.introduced_at.as_str() == ty)
    }

    /// Types for which `feature` is appropriate.
    pub fn appropriate(&self, h: &Hierarchy, feature: &str) -> Option<BTreeSet<TypeName>> {
        let d = self.get(feature)?;
        h.down_closure(d.introduced_at.as_str()).ok()
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FsError {
    #[error("encoding table was not compiled in feature-structure mode")]
    PlainTable,
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("feature `{feature}` is not appropriate for `{types}`")]
    Inappropriate { feature: String, types: TypeConj },
    #[error("unification failure")]
    Clash,
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

impl From<HierarchyError> for FsError {
    fn from(e: HierarchyError) -> FsError {
        FsError::Encode(EncodeError::Hierarchy(e))
    }
}

/// A feature structure: a root-template instance with feature slots filled
/// or open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureStructure {
    term: Term,
}

impl FeatureStructure {
    /// Fresh structure of type `c`; every appropriate feature slot is an open
    /// variable and the equality slot is fresh.
    pub fn new(tab: &EncodingTable, c: &TypeConj) -> Result<FeatureStructure, FsError> {
        if tab.mode() != Mode::FeatureStructure {
            return Err(FsError::PlainTable);
        }
        Ok(FeatureStructure { term: tab.encode(c)? })
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn types(&self, tab: &EncodingTable) -> Result<TypeConj, FsError> {
        Ok(tab.decode(&self.term)?)
    }

    /// The equality variable of this structure's root node.
    pub fn identity(&self) -> Option<Var> {
        self.term.args().last().and_then(Term::as_var)
    }

    /// Value at `path`, or `None` if some slot on the way is still open.
    pub fn get(&self, tab: &EncodingTable, path: &[&str]) -> Result<Option<FeatureStructure>, FsError> {
        let mut node = self.term.clone();
        for f in path {
            let rel = slot_path(tab, &node, f)?;
            let slot = node.at_path(&rel).expect("slot inside compiled node").clone();
            if slot.is_var() {
                return Ok(None);
            }
            node = slot;
        }
        Ok(Some(FeatureStructure { term: node }))
    }

    /// Unify `value` into the slot at `path`. Open slots along the way are
    /// filled with their restriction; the final value is unified with the
    /// last feature's restriction.
    pub fn put(
        &self,
        tab: &EncodingTable,
        path: &[&str],
        value: &FeatureStructure,
    ) -> Result<FeatureStructure, FsError> {
        let mut s = Substitution::new();
        let abs = descend(tab, &self.term, path, &mut s)?;
        let slot = s.apply(&self.term).at_path(&abs).expect("descended path exists").clone();
        if !s.unify_into(&slot, &value.term) {
            return Err(FsError::Clash);
        }
        Ok(FeatureStructure { term: s.apply(&self.term) })
    }

    /// Make the values at `a` and `b` one and the same node.
    pub fn share(&self, tab: &EncodingTable, a: &[&str], b: &[&str]) -> Result<FeatureStructure, FsError> {
        let mut s = Substitution::new();
        let pa = descend(tab, &self.term, a, &mut s)?;
        let pb = descend(tab, &self.term, b, &mut s)?;
        let cur = s.apply(&self.term);
        let (x, y) = (cur.at_path(&pa).unwrap().clone(), cur.at_path(&pb).unwrap().clone());
        if !s.unify_into(&x, &y) {
            return Err(FsError::Clash);
        }
        Ok(FeatureStructure { term: s.apply(&self.term) })
    }

    /// Term unification of the two roots.
    pub fn unify(&self, other: &FeatureStructure) -> Option<FeatureStructure> {
        let s = unify(&self.term, &other.term)?;
        Some(FeatureStructure { term: s.apply(&self.term) })
    }

    pub fn display<'a>(&'a self, tab: &'a EncodingTable) -> impl fmt::Display + 'a {
        DisplayFs { fs: self, tab }
    }
}

/// True iff both nodes carry the same equality variable.
pub fn token_identical(a: &FeatureStructure, b: &FeatureStructure) -> bool {
    matches!((a.identity(), b.identity()), (Some(x), Some(y)) if x == y)
}

pub fn fs_unify(a: &FeatureStructure, b: &FeatureStructure) -> Option<FeatureStructure> {
    a.unify(b)
}

/// Unify `a` with `b` and apply the unifier to both, so that afterwards they
/// denote the same node. Both are left untouched on failure.
pub fn fs_unify_both(a: &mut FeatureStructure, b: &mut FeatureStructure) -> bool {
    let Some(s) = unify(&a.term, &b.term) else { return false };
    a.term = s.apply(&a.term);
    b.term = s.apply(&b.term);
    true
}

struct DisplayFs<'a> {
    fs: &'a FeatureStructure,
    tab: &'a EncodingTable,
}

impl fmt::Display for DisplayFs<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fs.types(self.tab) {
            Ok(c) => write!(f, "{c}: {}", self.fs.term),
            Err(_) => write!(f, "{}", self.fs.term),
        }
    }
}

/// Relative path from a node to the slot of feature `f`.
fn slot_path(tab: &EncodingTable, node: &Term, f: &str) -> Result<Vec<usize>, FsError> {
    let h = tab.hierarchy();
    let decl = tab.features().get(f).ok_or_else(|| FsError::UnknownFeature(f.to_string()))?;
    let types = tab.decode(node)?;
    let intro = TypeConj::from_names([decl.introduced_at.as_str()]);
    if !h.subsumes(&intro, &types)? {
        return Err(FsError::Inappropriate { feature: f.to_string(), types });
    }
    let spec = tab.node(h.lookup(decl.introduced_at.as_str())?);
    let mut p = spec.carrier_path.clone();
    p.push(spec.feature_slot(f).expect("feature laid out at its introducing type"));
    Ok(p)
}

/// Walk `path` from the root, filling open slots with their restriction and
/// enforcing each restriction. Returns the absolute path of the last slot.
fn descend(tab: &EncodingTable, root: &Term, path: &[&str], s: &mut Substitution) -> Result<Vec<usize>, FsError> {
    let mut abs: Vec<usize> = Vec::new();
    for f in path {
        let cur = s.apply(root);
        let node = cur.at_path(&abs).expect("node exists").clone();
        abs.extend(slot_path(tab, &node, f)?);
        let slot = cur.at_path(&abs).expect("slot exists").clone();
        let restriction = tab.encode(&tab.features().get(f).expect("checked in slot_path").restriction)?;
        if !s.unify_into(&slot, &restriction) {
            return Err(FsError::Clash);
        }
    }
    Ok(abs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::HPSG_DECL;
    use crate::hierarchy::parse_declarations;

    const FEATS: &str = "
        sign intro [phon:sign].
        headed_ph intro [dtrs:sign, head_dtr:headed_ph].
        rel intro [gap:int].
        decl intro [subj:sign].
    ";

    fn setup() -> EncodingTable {
        let text = format!("{HPSG_DECL}{FEATS}");
        let decls = parse_declarations(&text).unwrap();
        let h = crate::hierarchy::build_hierarchy(&decls).unwrap();
        let feats = validate_features(&h, &decls.feature_decls).unwrap();
        EncodingTable::compile_with_features(&h, &feats)
    }

    fn c(s: &str) -> TypeConj {
        TypeConj::parse(s).unwrap()
    }

    fn fs(tab: &EncodingTable, s: &str) -> FeatureStructure {
        FeatureStructure::new(tab, &c(s)).unwrap()
    }

    fn validate(feats: &str) -> Result<FeatureSet, FeatureError> {
        let decls = parse_declarations(&format!("{HPSG_DECL}{feats}")).unwrap();
        let h = crate::hierarchy::build_hierarchy(&decls).unwrap();
        validate_features(&h, &decls.feature_decls)
    }

    #[test]
    fn appropriateness_is_down_closure() {
        let decls = parse_declarations(&format!("{HPSG_DECL}headed_ph intro [dtrs:sign].")).unwrap();
        let h = crate::hierarchy::build_hierarchy(&decls).unwrap();
        let feats = validate_features(&h, &decls.feature_decls).unwrap();
        let names: Vec<String> = feats.appropriate(&h, "dtrs").unwrap().iter().map(|n| n.to_string()).collect();
        assert_eq!(names, ["h_co", "h_fi", "h_mk", "h_su", "headed_ph", "su_wh_rel", "that_rel"]);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            validate("headed_ph intro [dtrs:sign]. rel intro [dtrs:sign]."),
            Err(FeatureError::Duplicate { .. })
        ));
        assert!(matches!(
            validate("headed_ph intro [dtrs:h_su & h_co]."),
            Err(FeatureError::InconsistentRestriction { .. })
        ));
        assert!(matches!(validate("nope intro [f:sign]."), Err(FeatureError::UnknownType { .. })));
        assert!(matches!(validate("sign intro [f:nope]."), Err(FeatureError::UnknownType { .. })));
    }

    #[test]
    fn layout_in_feature_mode() {
        let tab = setup();
        // root: two dims, one feature, equality slot
        assert_eq!(tab.node(tab.hierarchy().root()).arity(), 4);
        // decl has a feature, so it becomes a compound node
        let t = fs(&tab, "decl");
        assert_eq!(t.term().args()[1].functor(), Some("decl"));
        assert_eq!(t.term().args()[1].args().len(), 1);
        assert_eq!(t.types(&tab).unwrap(), c("decl"));
    }

    #[test]
    fn new_rejects_inconsistent_and_plain_tables() {
        let tab = setup();
        assert!(matches!(
            FeatureStructure::new(&tab, &c("h_su & h_co")),
            Err(FsError::Encode(EncodeError::Inconsistent(_)))
        ));
        let plain = EncodingTable::compile(tab.hierarchy());
        assert_eq!(FeatureStructure::new(&plain, &c("sign")), Err(FsError::PlainTable));
        assert_eq!(fs(&tab, "sign").types(&tab).unwrap(), c("sign"));
    }

    #[test]
    fn put_enforces_restriction() {
        let tab = setup();
        let r = fs(&tab, "rel");
        assert_eq!(r.put(&tab, &["gap"], &fs(&tab, "rel")), Err(FsError::Clash));
        let ok = r.put(&tab, &["gap"], &fs(&tab, "wh_int")).unwrap();
        assert_eq!(ok.get(&tab, &["gap"]).unwrap().unwrap().types(&tab).unwrap(), c("wh_int"));

        let h = fs(&tab, "headed_ph");
        let top = h.put(&tab, &["dtrs"], &fs(&tab, "sign")).unwrap();
        assert_eq!(top.get(&tab, &["dtrs"]).unwrap().unwrap().types(&tab).unwrap(), c("sign"));
        let v = h.put(&tab, &["dtrs"], &fs(&tab, "headed_ph")).unwrap();
        assert_eq!(v.get(&tab, &["dtrs"]).unwrap().unwrap().types(&tab).unwrap(), c("headed_ph"));
    }

    #[test]
    fn put_checks_appropriateness() {
        let tab = setup();
        let d = fs(&tab, "decl");
        assert!(matches!(d.put(&tab, &["dtrs"], &fs(&tab, "sign")), Err(FsError::Inappropriate { .. })));
        assert_eq!(d.put(&tab, &["nope"], &fs(&tab, "sign")), Err(FsError::UnknownFeature("nope".into())));
        // the intermediate slot is filled from its restriction (sign), which lacks `gap`
        assert!(matches!(
            fs(&tab, "headed_ph").put(&tab, &["dtrs", "gap"], &fs(&tab, "int")),
            Err(FsError::Inappropriate { .. })
        ));
        let deep = fs(&tab, "headed_ph").put(&tab, &["head_dtr", "dtrs"], &fs(&tab, "decl")).unwrap();
        let v = deep.get(&tab, &["head_dtr", "dtrs"]).unwrap().unwrap();
        assert_eq!(v.types(&tab).unwrap(), c("decl"));
    }

    #[test]
    fn unify_examples() {
        let tab = setup();
        let u = fs(&tab, "headed_ph").unify(&fs(&tab, "rel")).unwrap();
        assert_eq!(u.types(&tab).unwrap(), c("headed_ph & rel"));
        let a = fs(&tab, "decl");
        assert_eq!(a.unify(&a).unwrap(), a);
        assert!(fs(&tab, "wh_int").unify(&fs(&tab, "non_wh_rel")).is_none());
    }

    #[test]
    fn equality_slot_tracks_token_identity() {
        let tab = setup();
        let (a, b) = (fs(&tab, "decl"), fs(&tab, "decl"));
        assert_ne!(a.term(), b.term());
        assert!(!token_identical(&a, &b));
        let u = fs_unify(&a, &b).unwrap();
        let a2 = FeatureStructure { term: unify(a.term(), b.term()).unwrap().apply(a.term()) };
        let b2 = FeatureStructure { term: unify(a.term(), b.term()).unwrap().apply(b.term()) };
        assert!(token_identical(&a2, &b2));
        assert!(token_identical(&u, &u));
    }

    #[test]
    fn coreference_shares_identity() {
        let tab = setup();
        let h = fs(&tab, "headed_ph");
        let s = h.share(&tab, &["dtrs"], &["phon"]).unwrap();
        let x = s.get(&tab, &["dtrs"]).unwrap().unwrap();
        let y = s.get(&tab, &["phon"]).unwrap().unwrap();
        assert!(token_identical(&x, &y));
        // structurally equal but separately allocated values are not identical
        let t = h.put(&tab, &["dtrs"], &fs(&tab, "decl")).unwrap().put(&tab, &["phon"], &fs(&tab, "decl")).unwrap();
        let (x, y) = (t.get(&tab, &["dtrs"]).unwrap().unwrap(), t.get(&tab, &["phon"]).unwrap().unwrap());
        assert!(!token_identical(&x, &y));
        // putting the same allocation twice is coreference
        let v = fs(&tab, "decl");
        let t = h.put(&tab, &["dtrs"], &v).unwrap().put(&tab, &["phon"], &v).unwrap();
        let (x, y) = (t.get(&tab, &["dtrs"]).unwrap().unwrap(), t.get(&tab, &["phon"]).unwrap().unwrap());
        assert!(token_identical(&x, &y));
    }

    #[test]
    fn display_prefixes_types() {
        let tab = setup();
        let u = fs(&tab, "headed_ph").unify(&fs(&tab, "rel")).unwrap();
        assert!(u.display(&tab).to_string().starts_with("headed_ph & rel: sign(headed_ph("));
    }
}
