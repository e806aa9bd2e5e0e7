mod common;

use mdi::encoder::compile_encoding;
use mdi::features::{fs_unify, fs_unify_both, token_identical, validate_features, FeatureStructure};
use mdi::hierarchy::{build_hierarchy, parse_declarations};
use mdi::oracle::{check_faithfulness, closure_oracle, consistent_oracle, enumerate_complete};
use mdi::{EncodingTable, Hierarchy, TypeConj};
use proptest::prelude::*;

fn single(h: &Hierarchy, t: mdi::hierarchy::TypeId) -> TypeConj {
    TypeConj::from_names([h.name(t).as_str()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_hierarchies_are_valid(seed in any::<u64>()) {
        let g = common::generate(seed, 15);
        let h = Hierarchy::from_text(&g.product_form());
        prop_assert!(h.is_ok(), "{}\n{:?}", g.product_form(), h.err());
        let h = h.unwrap();
        prop_assert!(h.type_count() <= 15);
        prop_assert!(h.warnings().is_empty());
        prop_assert!(h.type_ids().all(|t| h.dims_of(t).len() <= 3));
        prop_assert!(h.type_ids().filter(|&t| h.parent_types(t).count() > 1).count() <= 1);
    }

    #[test]
    fn product_form_equals_split_form(seed in any::<u64>()) {
        let g = common::generate(seed, 15);
        let product = Hierarchy::from_text(&g.product_form()).unwrap();
        let split = Hierarchy::from_text(&g.split_form()).unwrap();
        prop_assert_eq!(product, split);
    }

    #[test]
    fn conjoin_laws(seed in any::<u64>(), picks in proptest::collection::vec(any::<prop::sample::Index>(), 3)) {
        let h = common::generate(seed, 15).hierarchy();
        let ids: Vec<_> = h.type_ids().collect();
        let [a, b, c] = [0, 1, 2].map(|i| single(&h, *picks[i].get(&ids)));
        prop_assert_eq!(h.conjoin(&a, &b).unwrap(), h.conjoin(&b, &a).unwrap());
        prop_assert_eq!(h.conjoin(&a, &a).unwrap(), Some(h.normalize(&a).unwrap()));
        let left = h.conjoin(&a, &b).unwrap().and_then(|ab| h.conjoin(&ab, &c).unwrap());
        let right = h.conjoin(&b, &c).unwrap().and_then(|bc| h.conjoin(&a, &bc).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn subsumption_is_a_preorder(seed in any::<u64>()) {
        let h = common::generate(seed, 15).hierarchy();
        let all: Vec<TypeConj> = h.type_ids().map(|t| single(&h, t)).collect();
        for a in &all {
            prop_assert!(h.subsumes(a, a).unwrap());
            for b in &all {
                for c in &all {
                    if h.subsumes(a, b).unwrap() && h.subsumes(b, c).unwrap() {
                        prop_assert!(h.subsumes(a, c).unwrap(), "{a} {b} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn encoding_is_faithful(seed in any::<u64>()) {
        let g = common::generate(seed, 15);
        let report = check_faithfulness(&EncodingTable::compile(&g.hierarchy()));
        prop_assert!(report.is_faithful(), "{}\n{}", g.product_form(), report.to_text());
    }

    #[test]
    fn oracle_agrees_with_hierarchy(seed in any::<u64>(), mask in any::<u16>()) {
        let h = common::generate(seed, 15).hierarchy();
        let up = closure_oracle(&h);
        for t in h.type_ids() {
            prop_assert_eq!(up[t.0].iter().copied().collect::<Vec<_>>(), {
                let mut v = h.closure_ids(t).to_vec();
                v.sort();
                v
            });
        }
        let subset: Vec<_> = h.type_ids().filter(|t| mask & (1 << t.0) != 0).collect();
        prop_assert_eq!(consistent_oracle(&h, &subset), h.consistent_ids(&subset));
    }

    #[test]
    fn complete_classifications(seed in any::<u64>()) {
        let h = common::generate(seed, 12).hierarchy();
        let all = enumerate_complete(&h).unwrap();
        prop_assert_eq!(all.len() as u64, mdi::systemic::count_possibilities(&h));
        // distinct classifications are mutually inconsistent
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                prop_assert_eq!(h.conjoin(a, b).unwrap(), None, "{} / {}", a, b);
            }
        }
        // every type occurs in some classification; with a second parent a
        // forced choice can rule a type out, as in t1 > [t2] * [t4]. t2 > [t3,t5]. t4 > [t5].
        let tree = h.type_ids().all(|t| h.parent_types(t).count() <= 1);
        for t in h.type_ids().filter(|_| tree) {
            let c = single(&h, t);
            prop_assert!(all.iter().any(|k| h.subsumes(&c, k).unwrap()), "{}", c);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn equality_variables(seed in any::<u64>()) {
        let g = common::generate_with_features(seed, 12);
        let text = g.product_form();
        let decls = parse_declarations(&text).unwrap();
        let h = build_hierarchy(&decls).unwrap();
        let feats = validate_features(&h, &decls.feature_decls).unwrap();
        let tab = compile_encoding(&h, &feats);
        for t in h.type_ids() {
            let c = single(&h, t);
            let mut a = FeatureStructure::new(&tab, &c).unwrap();
            let mut b = FeatureStructure::new(&tab, &c).unwrap();
            prop_assert!(!token_identical(&a, &b));
            let u = fs_unify(&a, &b).unwrap();
            prop_assert!(fs_unify_both(&mut a, &mut b));
            prop_assert!(token_identical(&a, &b));
            prop_assert!(token_identical(&a, &u));
        }
    }
}
