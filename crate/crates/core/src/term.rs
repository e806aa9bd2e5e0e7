//! First-order terms and their canonical text syntax.
//!
//! Terms print as `f(a,_,g(b))`. A variable that occurs once prints as `_`;
//! variables that occur more than once print as `_G1`, `_G2`, ... numbered in
//! first-occurrence order, so two alpha-equivalent terms always print the same.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

static NEXT_VAR: AtomicU64 = AtomicU64::new(0);

/// A logic variable. Identity is the allocation, never the printed name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u64);

impl Var {
    pub fn fresh() -> Var {
        Var(NEXT_VAR.fetch_add(1, Ordering::Relaxed))
    }

    pub fn id(self) -> u64 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    /// Functor applied to arguments; an atom when `args` is empty.
    App {
        functor: Arc<str>,
        args: Vec<Term>,
    },
}

impl Term {
    pub fn var() -> Term {
        Term::Var(Var::fresh())
    }

    pub fn atom(name: &str) -> Term {
        Term::App { functor: Arc::from(name), args: Vec::new() }
    }

    pub fn app(functor: &str, args: Vec<Term>) -> Term {
        Term::App { functor: Arc::from(functor), args }
    }

    pub fn functor(&self) -> Option<&str> {
        match self {
            Term::Var(_) => None,
            Term::App { functor, .. } => Some(functor),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App { args, .. } => args,
        }
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App { .. } => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Subterm reached by following argument indices from the root.
    pub fn at_path(&self, path: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in path {
            cur = cur.args().get(i)?;
        }
        Some(cur)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App { args, .. } => args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Variables in first-occurrence (depth-first, left-to-right) order, with repeats.
    pub fn var_occurrences(&self) -> Vec<Var> {
        fn walk(t: &Term, out: &mut Vec<Var>) {
            match t {
                Term::Var(v) => out.push(*v),
                Term::App { args, .. } => args.iter().for_each(|a| walk(a, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Copy of the term with every variable replaced by a fresh one,
    /// preserving sharing within the term.
    pub fn rename_apart(&self) -> Term {
        let mut map = HashMap::new();
        self.rename_with(&mut map)
    }

    pub(crate) fn rename_with(&self, map: &mut HashMap<Var, Var>) -> Term {
        match self {
            Term::Var(v) => Term::Var(*map.entry(*v).or_insert_with(Var::fresh)),
            Term::App { functor, args } => {
                Term::App { functor: functor.clone(), args: args.iter().map(|a| a.rename_with(map)).collect() }
            }
        }
    }

    /// Replace every functor named `from` by `to`, keeping arities.
    pub fn rename_functor(&self, from: &str, to: &str) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App { functor, args } => Term::App {
                functor: if &**functor == from { Arc::from(to) } else { functor.clone() },
                args: args.iter().map(|a| a.rename_functor(from, to)).collect(),
            },
        }
    }
}

/// Number of functor and atom occurrences; variables are not counted.
pub fn symbol_count(t: &Term) -> usize {
    match t {
        Term::Var(_) => 0,
        Term::App { args, .. } => 1 + args.iter().map(symbol_count).sum::<usize>(),
    }
}

/// True iff a consistent bijective renaming of variables maps `a` onto `b`.
pub fn alpha_equal(a: &Term, b: &Term) -> bool {
    fn go(a: &Term, b: &Term, fwd: &mut HashMap<Var, Var>, back: &mut HashMap<Var, Var>) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let f = *fwd.entry(*x).or_insert(*y);
                let g = *back.entry(*y).or_insert(*x);
                f == *y && g == *x
            }
            (Term::App { functor: f, args: xs }, Term::App { functor: g, args: ys }) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| go(x, y, fwd, back))
            }
            _ => false,
        }
    }
    go(a, b, &mut HashMap::new(), &mut HashMap::new())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let occ = self.var_occurrences();
        let mut counts: HashMap<Var, usize> = HashMap::new();
        for v in &occ {
            *counts.entry(*v).or_default() += 1;
        }
        let mut names: HashMap<Var, usize> = HashMap::new();
        for v in &occ {
            if counts[v] > 1 && !names.contains_key(v) {
                let n = names.len() + 1;
                names.insert(*v, n);
            }
        }
        fn write(t: &Term, names: &HashMap<Var, usize>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Term::Var(v) => match names.get(v) {
                    Some(n) => write!(f, "_G{n}"),
                    None => f.write_str("_"),
                },
                Term::App { functor, args } => {
                    f.write_str(functor)?;
                    if !args.is_empty() {
                        f.write_str("(")?;
                        for (i, a) in args.iter().enumerate() {
                            if i > 0 {
                                f.write_str(",")?;
                            }
                            write(a, names, f)?;
                        }
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        write(self, &names, f)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("term syntax error at column {column}: {message}")]
pub struct TermParseError {
    pub column: usize,
    pub message: String,
}

/// Parse the canonical term syntax. `_` is a fresh anonymous variable; any
/// other name starting with `_` or an uppercase letter is a named variable
/// shared within the parsed term.
pub fn parse_term(text: &str) -> Result<Term, TermParseError> {
    let mut p = TermParser { chars: text.char_indices().peekable(), text, vars: HashMap::new() };
    let t = p.term()?;
    p.skip_ws();
    if let Some(&(i, c)) = p.chars.peek() {
        return Err(p.err(i, format!("unexpected `{c}` after term")));
    }
    Ok(t)
}

struct TermParser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    vars: HashMap<String, Var>,
}

impl TermParser<'_> {
    fn err(&self, byte: usize, message: String) -> TermParseError {
        TermParseError { column: self.text[..byte].chars().count() + 1, message }
    }

    fn skip_ws(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn name(&mut self) -> String {
        let mut s = String::new();
        while let Some((_, c)) = self.chars.next_if(|(_, c)| c.is_alphanumeric() || *c == '_') {
            s.push(c);
        }
        s
    }

    fn term(&mut self) -> Result<Term, TermParseError> {
        self.skip_ws();
        let Some(&(start, c)) = self.chars.peek() else {
            return Err(self.err(self.text.len(), "unexpected end of input".into()));
        };
        if c == '_' || c.is_uppercase() {
            let name = self.name();
            if name == "_" {
                return Ok(Term::var());
            }
            let v = *self.vars.entry(name).or_insert_with(Var::fresh);
            return Ok(Term::Var(v));
        }
        if !(c.is_lowercase() || c.is_ascii_digit()) {
            return Err(self.err(start, format!("unexpected `{c}`")));
        }
        let functor = self.name();
        self.skip_ws();
        let mut args = Vec::new();
        if self.chars.next_if(|(_, c)| *c == '(').is_some() {
            loop {
                args.push(self.term()?);
                self.skip_ws();
                match self.chars.next() {
                    Some((_, ',')) => continue,
                    Some((_, ')')) => break,
                    Some((i, c)) => return Err(self.err(i, format!("expected `,` or `)`, found `{c}`"))),
                    None => return Err(self.err(self.text.len(), "unclosed `(`".into())),
                }
            }
        }
        Ok(Term::app(&functor, args))
    }
}
