use std::collections::BTreeSet;

use super::*;
use crate::fixtures::HPSG_DECL;

fn hpsg() -> Hierarchy {
    Hierarchy::from_text(HPSG_DECL).unwrap()
}

fn c(s: &str) -> TypeConj {
    TypeConj::parse(s).unwrap()
}

fn names(xs: &[&str]) -> BTreeSet<TypeName> {
    xs.iter().map(|x| TypeName::new(*x)).collect()
}

/// Reachability straight off the parsed (child, parent) pairs.
fn reach(decls: &DeclarationSet, t: &str) -> BTreeSet<TypeName> {
    let edges: Vec<(&str, &str)> = decls
        .subtype_decls
        .iter()
        .flat_map(|d| d.dims.iter().flatten().map(move |m| (m.as_str(), d.parent.as_str())))
        .collect();
    let mut out = BTreeSet::from([t.to_string()]);
    loop {
        let before = out.len();
        for (child, parent) in &edges {
            if out.contains(*child) {
                out.insert(parent.to_string());
            }
        }
        if out.len() == before {
            return out.into_iter().map(TypeName::new).collect();
        }
    }
}

#[test]
fn builds_clause_hierarchy() {
    let h = hpsg();
    assert_eq!(h.type_count(), 16);
    assert_eq!(h.name(h.root()).as_str(), "sign");
    let s = h.lookup("su_wh_rel").unwrap();
    let parents: BTreeSet<&str> = h.parent_types(s).map(|p| h.name(p).as_str()).collect();
    assert_eq!(parents, BTreeSet::from(["h_su", "wh_rel"]));
    assert!(h.warnings().is_empty());
}

#[test]
fn up_closure_matches_reachability() {
    let h = hpsg();
    let decls = parse_declarations(HPSG_DECL).unwrap();
    assert_eq!(h.up_closure("su_wh_rel").unwrap(), names(&["su_wh_rel", "h_su", "wh_rel", "headed_ph", "rel", "sign"]));
    assert_eq!(h.up_closure("sign").unwrap(), names(&["sign"]));
    assert_eq!(h.up_closure("decl").unwrap(), names(&["decl", "sign"]));
    for t in h.type_names() {
        assert_eq!(h.up_closure(t.as_str()).unwrap(), reach(&decls, t.as_str()));
    }
    assert_eq!(h.up_closure("nope"), Err(HierarchyError::UnknownType("nope".into())));
}

#[test]
fn co_members_as_parents_are_rejected() {
    let e = Hierarchy::from_text("a > [b,c]. b > [d]. c > [d].").unwrap_err();
    assert!(matches!(e, HierarchyError::InconsistentParents { ref ty, .. } if ty == "d"), "{e}");
}

#[test]
fn cross_dimension_diamond_is_valid() {
    let h = Hierarchy::from_text("a > [b] * [c]. b > [d]. c > [d].").unwrap();
    let d = h.lookup("d").unwrap();
    assert_eq!(h.parent_types(d).count(), 2);
}

#[test]
fn cycles_and_roots() {
    assert!(matches!(Hierarchy::from_text("a > [b]. b > [c]. c > [b]."), Err(HierarchyError::Cycle { .. })));
    assert!(matches!(Hierarchy::from_text("a > [b]. b > [a]."), Err(HierarchyError::Cycle { .. })));
    let e = Hierarchy::from_text("a > [b].\nx > [y].").unwrap_err();
    assert!(matches!(e, HierarchyError::MultipleRoots { ref roots, .. } if roots == &["a", "x"]));
    assert_eq!(e.span(), Some(Span { line: 2, column: 1 }));
    assert_eq!(Hierarchy::from_text("% nothing"), Err(HierarchyError::NoRoot));
}

#[test]
fn same_type_in_two_dimensions_of_one_parent() {
    let e = Hierarchy::from_text("a > [b,c] * [b,d].").unwrap_err();
    assert!(matches!(e, HierarchyError::DuplicateMembership { .. }), "{e}");
}

#[test]
fn redundant_parent_is_dropped_with_warning() {
    let h = Hierarchy::from_text("a > [b,c] * [d,e]. b > [d2]. a > [x]. b > [x].").unwrap();
    assert_eq!(h.warnings().len(), 1);
    let x = h.lookup("x").unwrap();
    assert_eq!(h.parent_types(x).map(|p| h.name(p).as_str()).collect::<Vec<_>>(), vec!["b"]);
    // the emptied dimension of `a` disappears
    assert_eq!(h.dims_of(h.lookup("a").unwrap()).len(), 2);
}

#[test]
fn product_form_equals_split_form() {
    let product = Hierarchy::from_text("x > [a,b] * [c,d]. a > [e].").unwrap();
    let split = Hierarchy::from_text("x > [a,b]. x > [c,d]. a > [e].").unwrap();
    assert_eq!(product, split);
    let swapped = Hierarchy::from_text("x > [c,d]. x > [a,b]. a > [e].").unwrap();
    assert_ne!(product, swapped);
}

#[test]
fn consistency_examples() {
    let h = hpsg();
    assert!(h.consistent(&c("headed_ph & rel")).unwrap());
    assert!(!h.consistent(&c("h_su & h_co")).unwrap());
    assert!(h.consistent(&c("sign")).unwrap());
    assert!(!h.consistent(&c("wh_int & that_rel")).unwrap());
    for t in h.type_names() {
        assert!(h.consistent(&TypeConj::from_names([t.as_str()])).unwrap());
    }
    assert!(h.consistent(&c("bogus")).is_err());
}

#[test]
fn conjoin_examples() {
    let h = hpsg();
    assert_eq!(h.conjoin(&c("headed_ph"), &c("rel")).unwrap(), Some(c("headed_ph & rel")));
    assert_eq!(h.conjoin(&c("su_wh_rel"), &c("h_su")).unwrap(), Some(c("su_wh_rel")));
    assert_eq!(h.conjoin(&c("wh_int"), &c("rel")).unwrap(), None);
    assert_eq!(h.conjoin(&c("sign"), &c("sign")).unwrap(), Some(c("sign")));
}

#[test]
fn subsumption_examples() {
    let h = hpsg();
    assert!(h.subsumes(&c("sign"), &c("decl")).unwrap());
    assert!(h.subsumes(&c("headed_ph & rel"), &c("su_wh_rel")).unwrap());
    assert!(!h.subsumes(&c("h_su"), &c("rel")).unwrap());
    assert!(!h.subsumes(&c("decl"), &c("sign")).unwrap());
}

#[test]
fn normalize_drops_ancestors() {
    let h = hpsg();
    assert_eq!(h.normalize(&c("sign & headed_ph & h_su")).unwrap(), c("h_su"));
    assert_eq!(h.normalize(&TypeConj::default()).unwrap(), c("sign"));
}

#[test]
fn down_closure() {
    let h = hpsg();
    assert_eq!(
        h.down_closure("headed_ph").unwrap(),
        names(&["headed_ph", "h_su", "h_co", "h_mk", "h_fi", "su_wh_rel", "that_rel"])
    );
}

#[test]
fn hierarchy_is_shareable_across_threads() {
    let h = std::sync::Arc::new(hpsg());
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let h = h.clone();
            std::thread::spawn(move || h.consistent(&c("headed_ph & rel")).unwrap())
        })
        .collect();
    assert!(handles.into_iter().all(|j| j.join().unwrap()));
}
