//! Syntactic unification with occurs check.

use std::collections::BTreeMap;

use crate::term::{Term, Var};

/// A set of variable bindings.
///
/// Bindings are kept triangular while unifying; every substitution handed out
/// by [`unify`] or [`Substitution::from_bindings`] is idempotent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    /// Build an idempotent substitution from possibly chained bindings.
    /// Returns `None` if the bindings are cyclic (`X -> f(X)`, or `X -> Y, Y -> X`
    /// with distinct terms).
    pub fn from_bindings(pairs: impl IntoIterator<Item = (Var, Term)>) -> Option<Substitution> {
        let raw = Substitution { bindings: pairs.into_iter().collect() };
        for v in raw.bindings.keys() {
            if raw.reaches(*v, &raw.bindings[v], &mut Vec::new()) {
                return None;
            }
        }
        Some(raw.normalized())
    }

    fn reaches(&self, target: Var, t: &Term, seen: &mut Vec<Var>) -> bool {
        match t {
            Term::Var(w) if *w == target => true,
            Term::Var(w) => {
                if seen.contains(w) {
                    return false;
                }
                seen.push(*w);
                self.bindings.get(w).is_some_and(|b| self.reaches(target, b, seen))
            }
            Term::App { args, .. } => args.iter().any(|a| self.reaches(target, a, seen)),
        }
    }

    fn normalized(&self) -> Substitution {
        let bindings =
            self.bindings.iter().map(|(v, t)| (*v, self.apply(t))).filter(|(v, t)| t.as_var() != Some(*v)).collect();
        Substitution { bindings }
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.bindings.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &Term)> {
        self.bindings.iter().map(|(v, t)| (*v, t))
    }

    /// Follow variable-to-variable and variable-to-term links to the first
    /// unbound variable or compound.
    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.bindings.get(v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    /// Replace bound variables throughout `t`, resolving chains fully.
    pub fn apply(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Var(v) => Term::Var(*v),
            Term::App { functor, args } => {
                Term::App { functor: functor.clone(), args: args.iter().map(|a| self.apply(a)).collect() }
            }
        }
    }

    fn occurs(&self, v: Var, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => *w == v,
            Term::App { args, .. } => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    /// Extend the substitution so that `a` and `b` become equal. On failure
    /// the substitution may hold partial bindings and should be discarded.
    pub(crate) fn unify_into(&mut self, a: &Term, b: &Term) -> bool {
        let mut stack = vec![(a.clone(), b.clone())];
        while let Some((x, y)) = stack.pop() {
            let x = self.walk(&x).clone();
            let y = self.walk(&y).clone();
            match (x, y) {
                (Term::Var(v), Term::Var(w)) if v == w => {}
                (Term::Var(v), t) | (t, Term::Var(v)) => {
                    if self.occurs(v, &t) {
                        return false;
                    }
                    self.bindings.insert(v, t);
                }
                (Term::App { functor: f, args: xs }, Term::App { functor: g, args: ys }) => {
                    if f != g || xs.len() != ys.len() {
                        return false;
                    }
                    stack.extend(xs.into_iter().zip(ys).rev());
                }
            }
        }
        true
    }
}

/// Most general unifier of `a` and `b`, or `None` if they do not unify.
pub fn unify(a: &Term, b: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    if s.unify_into(a, b) {
        Some(s.normalized())
    } else {
        None
    }
}

/// Unify all terms pairwise-sequentially and return the common instance.
pub fn unify_all<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Option<Term> {
    let mut it = terms.into_iter();
    let first = it.next()?.clone();
    let mut s = Substitution::new();
    for t in it {
        if !s.unify_into(&first, t) {
            return None;
        }
    }
    Some(s.apply(&first))
}

pub fn apply(s: &Substitution, t: &Term) -> Term {
    s.apply(t)
}

/// One-way matching: a substitution `s` over the variables of `pattern` with
/// `s(pattern) == target`, treating variables of `target` as constants.
pub fn matches(pattern: &Term, target: &Term) -> bool {
    fn go(p: &Term, t: &Term, seen: &mut BTreeMap<Var, Term>) -> bool {
        match p {
            Term::Var(v) => match seen.get(v) {
                Some(bound) => bound == t,
                None => {
                    seen.insert(*v, t.clone());
                    true
                }
            },
            Term::App { functor: f, args: xs } => match t {
                Term::App { functor: g, args: ys } => {
                    f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| go(x, y, seen))
                }
                Term::Var(_) => false,
            },
        }
    }
    go(pattern, target, &mut BTreeMap::new())
}
