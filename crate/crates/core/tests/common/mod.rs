#![allow(dead_code)]

use std::collections::BTreeSet;

use mdi::Hierarchy;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// A generated hierarchy as an ordered list of dimensions.
#[derive(Clone, Debug)]
pub struct Generated {
    pub types: Vec<String>,
    /// (parent, members) in creation order.
    pub dims: Vec<(String, Vec<String>)>,
    pub features: Vec<(String, String, String)>,
}

impl Generated {
    /// One product declaration per parent.
    pub fn product_form(&self) -> String {
        let mut parents: Vec<&str> = Vec::new();
        for (p, _) in &self.dims {
            if !parents.contains(&p.as_str()) {
                parents.push(p);
            }
        }
        let mut out = String::new();
        for p in parents {
            let lists: Vec<String> =
                self.dims.iter().filter(|(q, _)| q == p).map(|(_, ms)| format!("[{}]", ms.join(","))).collect();
            out.push_str(&format!("{p} > {}.\n", lists.join(" * ")));
        }
        out.push_str(&self.feature_text());
        out
    }

    /// One declaration per dimension, in creation order.
    pub fn split_form(&self) -> String {
        let mut out = String::new();
        for (p, ms) in &self.dims {
            out.push_str(&format!("{p} > [{}].\n", ms.join(",")));
        }
        out.push_str(&self.feature_text());
        out
    }

    fn feature_text(&self) -> String {
        self.features.iter().map(|(t, f, r)| format!("{t} intro [{f}:{r}].\n")).collect()
    }

    pub fn hierarchy(&self) -> Hierarchy {
        Hierarchy::from_text(&self.product_form()).expect("generated hierarchy is valid")
    }
}

/// A valid hierarchy of at most `max_types` types, at most three dimensions
/// per type and at most one type with two parents.
pub fn generate(seed: u64, max_types: usize) -> Generated {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_types.max(2));
    let types: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let mut dims: Vec<(String, Vec<String>)> = Vec::new();
    let mut parent_of = vec![0usize; n];
    for i in 1..n {
        let p = rng.gen_range(0..i);
        parent_of[i] = p;
        let own: Vec<usize> = (0..dims.len()).filter(|&d| dims[d].0 == types[p]).collect();
        if own.is_empty() || (own.len() < 3 && rng.gen_bool(0.4)) {
            dims.push((types[p].clone(), vec![types[i].clone()]));
        } else {
            let d = *own.choose(&mut rng).unwrap();
            dims[d].1.push(types[i].clone());
        }
    }

    let mut g = Generated { types, dims, features: Vec::new() };
    if n > 3 && rng.gen_bool(0.5) {
        add_diamond(&mut g, &mut rng, &parent_of);
    }
    g
}

fn ancestors(parent_of: &[usize], mut t: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::from([t]);
    while t != 0 {
        t = parent_of[t];
        out.insert(t);
    }
    out
}

/// Give one type a second parent when that keeps the hierarchy valid and
/// free of redundant edges.
fn add_diamond(g: &mut Generated, rng: &mut StdRng, parent_of: &[usize]) {
    let h = g.hierarchy();
    let n = g.types.len();
    let mut candidates = Vec::new();
    for x in 1..n {
        for q in 1..n {
            let p = parent_of[x];
            if q == p || ancestors(parent_of, x).contains(&q) || ancestors(parent_of, q).contains(&x) {
                continue;
            }
            if ancestors(parent_of, p).contains(&q) || ancestors(parent_of, q).contains(&p) {
                continue;
            }
            let ids = [h.lookup(&g.types[p]).unwrap(), h.lookup(&g.types[q]).unwrap()];
            if h.consistent_ids(&ids) {
                candidates.push((x, q));
            }
        }
    }
    let Some(&(x, q)) = candidates.choose(rng) else { return };
    let qname = g.types[q].clone();
    let xname = g.types[x].clone();
    let own: Vec<usize> = (0..g.dims.len()).filter(|&d| g.dims[d].0 == qname).collect();
    if own.is_empty() || (own.len() < 3 && rng.gen_bool(0.5)) {
        g.dims.push((qname, vec![xname]));
    } else {
        let d = *own.choose(rng).unwrap();
        g.dims[d].1.push(xname);
    }
}

/// A generated hierarchy with a few features, each restricted to one type.
pub fn generate_with_features(seed: u64, max_types: usize) -> Generated {
    let mut g = generate(seed, max_types);
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
    let k = rng.gen_range(1..=3);
    for i in 0..k {
        let at = g.types.choose(&mut rng).unwrap().clone();
        let restriction = g.types.choose(&mut rng).unwrap().clone();
        g.features.push((at, format!("f{i}"), restriction));
    }
    g
}
