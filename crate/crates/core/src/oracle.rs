//! Reference implementations used to check the term encoding.
//!
//! Nothing here goes through the encoder's templates or the hierarchy's
//! cached closures: closures are recomputed from the dimension lists,
//! consistency is checked by counting members per dimension, and a separate
//! substitution-list unifier cross-checks the production one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::encoder::EncodingTable;
use crate::hierarchy::{Hierarchy, TypeConj, TypeId};
use crate::systemic::{Entry, Network};
use crate::term::{Term, Var};

/// Enumeration gives up past this many candidate assignments.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration exceeded {limit} candidates")]
    TooLarge { limit: u64 },
}

/// Up-closure of every type, by fixpoint over the dimension lists.
pub fn closure_oracle(h: &Hierarchy) -> Vec<BTreeSet<TypeId>> {
    let mut up: Vec<BTreeSet<TypeId>> = (0..h.type_count()).map(|i| BTreeSet::from([TypeId(i)])).collect();
    loop {
        let mut changed = false;
        for d in h.dims() {
            for m in &d.members {
                let parent_up = up[d.parent.0].clone();
                let before = up[m.0].len();
                up[m.0].extend(parent_up);
                changed |= up[m.0].len() != before;
            }
        }
        if !changed {
            return up;
        }
    }
}

/// The conjunction of `ts` is consistent when no dimension has two distinct
/// members among the closures.
pub fn consistent_oracle(h: &Hierarchy, ts: &[TypeId]) -> bool {
    let up = closure_oracle(h);
    consistent_with(h, &up, ts)
}

fn consistent_with(h: &Hierarchy, up: &[BTreeSet<TypeId>], ts: &[TypeId]) -> bool {
    let all: BTreeSet<TypeId> = ts.iter().flat_map(|t| up[t.0].iter().copied()).collect();
    h.dims().iter().all(|d| d.members.iter().filter(|m| all.contains(m)).count() <= 1)
}

fn normalize_with(up: &[BTreeSet<TypeId>], ts: &BTreeSet<TypeId>, root: TypeId) -> BTreeSet<TypeId> {
    let keep: BTreeSet<TypeId> =
        ts.iter().copied().filter(|&a| !ts.iter().any(|&b| b != a && up[b.0].contains(&a))).collect();
    if keep.is_empty() {
        BTreeSet::from([root])
    } else {
        keep
    }
}

/// Every complete classification, each as its most specific types.
///
/// Dimensions are visited in the order of their parents' first appearance in
/// a topological sort; each is assigned one member or left empty, and the
/// finished assignment is validated as a whole.
pub fn enumerate_complete(h: &Hierarchy) -> Result<Vec<TypeConj>, OracleError> {
    let up = closure_oracle(h);
    // topological order recomputed from the closures: fewer ancestors first
    let mut order: Vec<TypeId> = (0..h.type_count()).map(TypeId).collect();
    order.sort_by_key(|t| (up[t.0].len(), t.0));
    let pos: BTreeMap<TypeId, usize> = order.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut dims: Vec<usize> = (0..h.dims().len()).collect();
    dims.sort_by_key(|&d| (pos[&h.dims()[d].parent], d));

    let needs: Vec<Vec<TypeId>> = h
        .dims()
        .iter()
        .map(|d| {
            let members: BTreeSet<TypeId> = d.members.iter().copied().collect();
            h.dims()
                .iter()
                .filter(|e| e.members.iter().copied().collect::<BTreeSet<_>>() == members)
                .map(|e| e.parent)
                .collect()
        })
        .collect();
    let mut e =
        Enumeration { h, up: &up, dims, needs, assigned: vec![None; h.dims().len()], visited: 0, out: Vec::new() };
    let mut chosen = BTreeSet::from([h.root()]);
    e.go(0, &mut chosen)?;
    Ok(e.out.iter().map(|full| names(h, &normalize_with(&up, full, h.root()))).collect())
}

fn names(h: &Hierarchy, ts: &BTreeSet<TypeId>) -> TypeConj {
    TypeConj::from_names(ts.iter().map(|t| h.name(*t).as_str()))
}

struct Enumeration<'a> {
    h: &'a Hierarchy,
    up: &'a [BTreeSet<TypeId>],
    dims: Vec<usize>,
    /// Parents that must all be chosen before a dimension is required.
    needs: Vec<Vec<TypeId>>,
    assigned: Vec<Option<TypeId>>,
    visited: u64,
    out: Vec<BTreeSet<TypeId>>,
}

impl Enumeration<'_> {
    fn go(&mut self, i: usize, chosen: &mut BTreeSet<TypeId>) -> Result<(), OracleError> {
        self.visited += 1;
        if self.visited > ENUMERATION_LIMIT {
            return Err(OracleError::TooLarge { limit: ENUMERATION_LIMIT });
        }
        if i == self.dims.len() {
            if self.valid(chosen) {
                self.out.push(chosen.clone());
            }
            return Ok(());
        }
        let d = self.dims[i];
        self.go(i + 1, chosen)?;
        let dim = &self.h.dims()[d];
        if !chosen.contains(&dim.parent) {
            return Ok(());
        }
        for &m in &dim.members {
            self.assigned[d] = Some(m);
            let fresh = chosen.insert(m);
            self.go(i + 1, chosen)?;
            if fresh {
                chosen.remove(&m);
            }
        }
        self.assigned[d] = None;
        Ok(())
    }

    fn valid(&self, chosen: &BTreeSet<TypeId>) -> bool {
        let h = self.h;
        for (d, dim) in h.dims().iter().enumerate() {
            let present: Vec<TypeId> = dim.members.iter().copied().filter(|m| chosen.contains(m)).collect();
            match (self.assigned[d], present.as_slice()) {
                (Some(a), [m]) if a == *m => {}
                (None, []) => {
                    if self.required(d, chosen) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        chosen.iter().all(|t| self.up[t.0].is_subset(chosen))
    }

    fn required(&self, d: usize, chosen: &BTreeSet<TypeId>) -> bool {
        self.needs[d].iter().all(|p| chosen.contains(p))
    }
}

/// Every complete selection of features in a network, evaluating entry
/// conditions directly. Disjunctive entries are allowed.
pub fn enumerate_network(net: &Network) -> Result<Vec<BTreeSet<String>>, OracleError> {
    let mut out = Vec::new();
    let mut visited = 0;
    let chosen = BTreeSet::from([net.root.clone()]);
    walk_network(net, &chosen, &mut vec![false; net.systems.len()], &mut visited, &mut out)?;
    Ok(out)
}

fn walk_network(
    net: &Network,
    chosen: &BTreeSet<String>,
    done: &mut Vec<bool>,
    visited: &mut u64,
    out: &mut Vec<BTreeSet<String>>,
) -> Result<(), OracleError> {
    *visited += 1;
    if *visited > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge { limit: ENUMERATION_LIMIT });
    }
    let entered = |s: usize| match &net.systems[s].entry {
        Entry::All(fs) => fs.iter().all(|f| chosen.contains(f)),
        Entry::Any(fs) => fs.iter().any(|f| chosen.contains(f)),
    };
    let Some(s) = (0..net.systems.len()).find(|&s| !done[s] && entered(s)) else {
        out.push(chosen.clone());
        return Ok(());
    };
    done[s] = true;
    for alt in &net.systems[s].alternatives {
        let mut next = chosen.clone();
        next.insert(alt.clone());
        walk_network(net, &next, done, visited, out)?;
    }
    done[s] = false;
    Ok(())
}

/// Selections grouped by the alternative taken in the first system entered
/// from the root, in that system's order.
pub fn network_breakdown(net: &Network) -> Result<Vec<(String, usize)>, OracleError> {
    let all = enumerate_network(net)?;
    let Some(top) = net.systems.iter().find(|s| s.entry == Entry::All(vec![net.root.clone()])) else {
        return Ok(vec![(net.root.clone(), all.len())]);
    };
    Ok(top.alternatives.iter().map(|a| (a.clone(), all.iter().filter(|sel| sel.contains(a)).count())).collect())
}

/// Plain Robinson unification over an explicit binding list.
pub fn naive_unify(a: &Term, b: &Term) -> Option<Term> {
    let mut bindings: Vec<(Var, Term)> = Vec::new();
    let mut stack = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = stack.pop() {
        let x = substitute(&bindings, &x);
        let y = substitute(&bindings, &y);
        match (&x, &y) {
            (Term::Var(v), Term::Var(w)) if v == w => {}
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if t.contains_var(*v) {
                    return None;
                }
                for (_, bound) in bindings.iter_mut() {
                    *bound = substitute(&[(*v, t.clone())], bound);
                }
                bindings.push((*v, t.clone()));
            }
            (Term::App { functor: f, args: xs }, Term::App { functor: g, args: ys }) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                stack.extend(xs.iter().cloned().zip(ys.iter().cloned()));
            }
        }
    }
    Some(substitute(&bindings, a))
}

fn substitute(bindings: &[(Var, Term)], t: &Term) -> Term {
    match t {
        Term::Var(v) => match bindings.iter().find(|(w, _)| w == v) {
            Some((_, bound)) => bound.clone(),
            None => t.clone(),
        },
        Term::App { functor, args } => {
            Term::App { functor: functor.clone(), args: args.iter().map(|a| substitute(bindings, a)).collect() }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    /// Conjoining an ordered pair of types.
    Pair(String, String),
    /// Decoding the encoding of a single type.
    RoundTrip(String),
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Pair(a, b) => write!(f, "{a} & {b}"),
            Check::RoundTrip(t) => write!(f, "round trip {t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub check: Check,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaithfulnessReport {
    pub types: usize,
    pub pairs_checked: usize,
    pub round_trips_checked: usize,
    pub consistent_pairs: usize,
    pub mismatches: Vec<Mismatch>,
}

impl FaithfulnessReport {
    pub fn is_faithful(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} types, {} ordered pairs ({} consistent), {} round trips",
            self.types, self.pairs_checked, self.consistent_pairs, self.round_trips_checked
        );
        for m in &self.mismatches {
            let _ = writeln!(out, "mismatch: {}: expected {}, got {}", m.check, m.expected, m.actual);
        }
        let _ = writeln!(out, "{}", if self.is_faithful() { "faithful" } else { "NOT faithful" });
        out
    }

    /// One `key=value` record per line, for scripts.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "types={}", self.types);
        let _ = writeln!(out, "pairs={}", self.pairs_checked);
        let _ = writeln!(out, "consistent_pairs={}", self.consistent_pairs);
        let _ = writeln!(out, "round_trips={}", self.round_trips_checked);
        let _ = writeln!(out, "mismatches={}", self.mismatches.len());
        for m in &self.mismatches {
            let _ = writeln!(out, "mismatch\t{}\t{}\t{}", m.check, m.expected, m.actual);
        }
        out
    }
}

/// Compare the encoding against the oracle on every ordered pair of types and
/// on a decode round trip of every type.
pub fn check_faithfulness(tab: &EncodingTable) -> FaithfulnessReport {
    let h = tab.hierarchy();
    let up = closure_oracle(h);
    let ids: Vec<TypeId> = (0..h.type_count()).map(TypeId).collect();
    let show = |ts: &BTreeSet<TypeId>| ts.iter().map(|t| h.name(*t).as_str()).collect::<Vec<_>>().join(" & ");
    let mut report = FaithfulnessReport { types: ids.len(), ..Default::default() };

    for &a in &ids {
        for &b in &ids {
            report.pairs_checked += 1;
            let check = Check::Pair(h.name(a).to_string(), h.name(b).to_string());
            let expected = consistent_with(h, &up, &[a, b]);
            report.consistent_pairs += usize::from(expected);
            let want = normalize_with(&up, &BTreeSet::from([a, b]), h.root());
            let got = tab.encode_ids(&[a, b]);
            let cross = naive_unify(&tab.template_of(a).rename_apart(), &tab.template_of(b).rename_apart());
            let mismatch = match (&got, expected) {
                (None, false) => None,
                (Some(_), false) => Some(("inconsistent".to_string(), "unifies".to_string())),
                (None, true) => Some((show(&want), "fails to unify".to_string())),
                (Some(t), true) => match tab.decode(t) {
                    Ok(c) => {
                        let decoded: BTreeSet<TypeId> = c.iter().filter_map(|n| h.id(n.as_str())).collect();
                        (decoded != want).then(|| (show(&want), show(&decoded)))
                    }
                    Err(e) => Some((show(&want), e.to_string())),
                },
            };
            let mismatch = mismatch.or_else(|| {
                (cross.is_some() != got.is_some()).then(|| {
                    let side = |ok: bool| if ok { "unifies" } else { "fails" };
                    (format!("reference unifier {}", side(cross.is_some())), side(got.is_some()).to_string())
                })
            });
            if let Some((expected, actual)) = mismatch {
                report.mismatches.push(Mismatch { check, expected, actual });
            }
        }
    }

    for &t in &ids {
        report.round_trips_checked += 1;
        let want = BTreeSet::from([t]);
        let actual = match tab.encode_ids(&[t]).map(|term| tab.decode(&term)) {
            Some(Ok(c)) => c.iter().filter_map(|n| h.id(n.as_str())).collect::<BTreeSet<_>>(),
            _ => BTreeSet::new(),
        };
        if actual != want {
            report.mismatches.push(Mismatch {
                check: Check::RoundTrip(h.name(t).to_string()),
                expected: show(&want),
                actual: if actual.is_empty() { "no decoding".into() } else { show(&actual) },
            });
        }
    }
    report
}
