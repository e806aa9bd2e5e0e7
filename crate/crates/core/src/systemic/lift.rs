//! Rewriting disjunctive entry conditions into plain subtyping.
//!
//! For a system `x` entered by `a | b | ...`, two new types `x` and `not_x`
//! become a new dimension at the top of the enclosing choice system (the
//! nearest system whose alternatives dominate every disjunct). Alternatives of
//! that system that dominate some disjunct move under `x`, the rest under
//! `not_x`, and `x`'s own alternatives hang under the new type `x`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::network::{Entry, Network, System};

/// One introduced pair of types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedPair {
    /// The system whose entry condition was disjunctive.
    pub target: String,
    pub positive: String,
    pub negative: String,
    /// Choice system the pair was lifted to.
    pub enclosing: String,
    /// Alternatives of the enclosing system rehomed under `positive`.
    pub under_positive: Vec<String>,
    pub under_negative: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedNetwork {
    /// The rewritten network. It has no disjunctive entries; alternatives of a
    /// lifted system may belong to several systems.
    pub network: Network,
    pub pairs: Vec<LiftedPair>,
}

struct Ancestry<'a> {
    net: &'a Network,
    system_of: HashMap<&'a str, usize>,
    memo: HashMap<&'a str, BTreeSet<&'a str>>,
}

impl<'a> Ancestry<'a> {
    fn new(net: &'a Network) -> Self {
        let mut system_of = HashMap::new();
        for (i, s) in net.systems.iter().enumerate() {
            for a in &s.alternatives {
                system_of.insert(a.as_str(), i);
            }
        }
        Ancestry { net, system_of, memo: HashMap::new() }
    }

    /// The feature itself and every feature it depends on.
    fn of(&mut self, f: &'a str) -> BTreeSet<&'a str> {
        if let Some(s) = self.memo.get(f) {
            return s.clone();
        }
        let mut out = BTreeSet::from([f]);
        if let Some(&i) = self.system_of.get(f) {
            let net = self.net;
            for e in net.systems[i].entry.features() {
                out.extend(self.of(e));
            }
        }
        self.memo.insert(f, out.clone());
        out
    }

    fn depth(&self, system: usize, seen: &mut Vec<usize>) -> usize {
        if seen.contains(&system) {
            return 0;
        }
        seen.push(system);
        let d = self.net.systems[system]
            .entry
            .features()
            .iter()
            .filter_map(|f| self.system_of.get(f.as_str()))
            .map(|&s| self.depth(s, seen))
            .max()
            .unwrap_or(0);
        seen.pop();
        d + 1
    }
}

pub fn lift_disjunctions(net: &Network) -> LiftedNetwork {
    let mut anc = Ancestry::new(net);
    let mut taken: BTreeSet<String> = net.features().into_iter().map(String::from).collect();
    taken.extend(net.systems.iter().map(|s| s.name.clone()));
    let mut fresh = |base: String| {
        let mut name = base;
        while taken.contains(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        name
    };

    // enclosing system index -> pairs lifted into it
    let mut lifted: BTreeMap<usize, Vec<LiftedPair>> = BTreeMap::new();
    // systems whose disjunction holds whenever another system is entered
    let mut always: HashMap<usize, usize> = HashMap::new();
    // systems with a disjunct that is the root
    let mut rooted: Vec<usize> = Vec::new();

    for (x, sys) in net.systems.iter().enumerate() {
        let Entry::Any(disjuncts) = &sys.entry else { continue };
        if disjuncts.len() < 2 {
            continue;
        }
        let ancestors: Vec<BTreeSet<&str>> = disjuncts.iter().map(|d| anc.of(d)).collect();
        let enclosing = net
            .systems
            .iter()
            .enumerate()
            .filter(|(_, k)| ancestors.iter().all(|a| k.alternatives.iter().any(|alt| a.contains(alt.as_str()))))
            .max_by_key(|(k, _)| (anc.depth(*k, &mut Vec::new()), std::cmp::Reverse(*k)))
            .map(|(k, _)| k);
        let Some(k) = enclosing else {
            rooted.push(x);
            continue;
        };
        let (pos, neg): (Vec<String>, Vec<String>) = net.systems[k]
            .alternatives
            .iter()
            .cloned()
            .partition(|alt| ancestors.iter().any(|a| a.contains(alt.as_str())));
        if neg.is_empty() {
            always.insert(x, k);
            continue;
        }
        let negative = fresh(format!("not_{}", sys.name));
        // system names never clash with feature names, so the system name is free
        let positive = sys.name.clone();
        lifted.entry(k).or_default().push(LiftedPair {
            target: sys.name.clone(),
            positive,
            negative,
            enclosing: net.systems[k].name.clone(),
            under_positive: pos,
            under_negative: neg,
        });
    }

    let positive_of: HashMap<&str, &str> =
        lifted.values().flatten().map(|p| (p.target.as_str(), p.positive.as_str())).collect();
    // Entry of a system once disjunctions are gone.
    fn resolved(
        net: &Network,
        i: usize,
        positive_of: &HashMap<&str, &str>,
        always: &HashMap<usize, usize>,
        rooted: &[usize],
        depth: usize,
    ) -> Vec<String> {
        let s = &net.systems[i];
        if let Some(p) = positive_of.get(s.name.as_str()) {
            return vec![p.to_string()];
        }
        if rooted.contains(&i) || depth > net.systems.len() {
            return vec![net.root.clone()];
        }
        if let Some(&k) = always.get(&i) {
            return resolved(net, k, positive_of, always, rooted, depth + 1);
        }
        match &s.entry {
            Entry::All(fs) | Entry::Any(fs) => fs.clone(),
        }
    }

    let mut systems = Vec::new();
    for (i, s) in net.systems.iter().enumerate() {
        let entry = resolved(net, i, &positive_of, &always, &rooted, 0);
        match lifted.get(&i) {
            Some(pairs) => {
                for p in pairs {
                    systems.push(System {
                        name: fresh(format!("{}_lift", p.target)),
                        alternatives: vec![p.positive.clone(), p.negative.clone()],
                        entry: Entry::All(entry.clone()),
                    });
                }
                for p in pairs {
                    systems.push(System {
                        name: fresh(format!("{}_yes", p.target)),
                        alternatives: p.under_positive.clone(),
                        entry: Entry::All(vec![p.positive.clone()]),
                    });
                    systems.push(System {
                        name: fresh(format!("{}_no", p.target)),
                        alternatives: p.under_negative.clone(),
                        entry: Entry::All(vec![p.negative.clone()]),
                    });
                }
            }
            None => systems.push(System {
                name: s.name.clone(),
                alternatives: s.alternatives.clone(),
                entry: Entry::All(entry),
            }),
        }
    }
    LiftedNetwork {
        network: Network { root: net.root.clone(), systems },
        pairs: lifted.into_values().flatten().collect(),
    }
}
