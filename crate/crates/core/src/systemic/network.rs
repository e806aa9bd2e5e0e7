//! `.sysnet` network files.
//!
//! ```text
//! root pronoun.
//! choice kind -> question | personal | demonstrative.
//! entry kind <- pronoun.
//! and personal -> case & person.        % personal enters both systems
//! entry gender <- third & singular.     % conjunctive entry condition
//! entry case <- question | personal.    % disjunctive entry condition
//! ```

use std::collections::{BTreeSet, HashMap};

use crate::lex::{Cursor, Span, SyntaxError, Tok};

use super::SystemicError;

/// Condition under which a system is entered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    /// Every listed feature must be chosen. A single feature is the plain case.
    All(Vec<String>),
    /// Any listed feature suffices.
    Any(Vec<String>),
}

impl Entry {
    pub fn features(&self) -> &[String] {
        match self {
            Entry::All(fs) | Entry::Any(fs) => fs,
        }
    }

    pub fn is_disjunctive(&self) -> bool {
        matches!(self, Entry::Any(fs) if fs.len() > 1)
    }
}

/// A choice system: exactly one alternative is chosen once the system is entered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    pub name: String,
    pub alternatives: Vec<String>,
    pub entry: Entry,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    pub root: String,
    pub systems: Vec<System>,
}

impl Network {
    pub fn system(&self, name: &str) -> Option<&System> {
        self.systems.iter().find(|s| s.name == name)
    }

    /// Every feature, root first, then alternatives in system order.
    pub fn features(&self) -> Vec<&str> {
        let mut out = vec![self.root.as_str()];
        for s in &self.systems {
            for a in &s.alternatives {
                if !out.contains(&a.as_str()) {
                    out.push(a);
                }
            }
        }
        out
    }

    pub fn disjunctive_entries(&self) -> usize {
        self.systems.iter().filter(|s| s.entry.is_disjunctive()).count()
    }
}

enum Stmt {
    Root(String),
    Choice(String, Vec<String>),
    And(String, Vec<String>),
    Entry(String, Entry),
}

pub fn parse_network(text: &str) -> Result<Network, SystemicError> {
    let mut cur = Cursor::new(text)?;
    let mut stmts: Vec<(Stmt, Span)> = Vec::new();
    while !cur.at_end() {
        let (kw, span) = cur.ident()?;
        let stmt = match kw.as_str() {
            "root" => Stmt::Root(cur.ident()?.0),
            "choice" => {
                let name = cur.ident()?.0;
                cur.expect(&Tok::Arrow)?;
                Stmt::Choice(name, separated(&mut cur, &Tok::Bar)?)
            }
            "and" => {
                let feature = cur.ident()?.0;
                cur.expect(&Tok::Arrow)?;
                Stmt::And(feature, separated(&mut cur, &Tok::Amp)?)
            }
            "entry" => {
                let name = cur.ident()?.0;
                cur.expect(&Tok::LArrow)?;
                let first = cur.ident()?.0;
                let entry = match cur.peek() {
                    Some(Tok::Amp) => {
                        cur.next();
                        let mut fs = vec![first];
                        fs.extend(separated(&mut cur, &Tok::Amp)?);
                        Entry::All(fs)
                    }
                    Some(Tok::Bar) => {
                        cur.next();
                        let mut fs = vec![first];
                        fs.extend(separated(&mut cur, &Tok::Bar)?);
                        Entry::Any(fs)
                    }
                    _ => Entry::All(vec![first]),
                };
                Stmt::Entry(name, entry)
            }
            other => {
                return Err(SyntaxError::new(
                    span,
                    format!("expected `root`, `choice`, `and` or `entry`, found `{other}`"),
                )
                .into())
            }
        };
        cur.expect(&Tok::Dot)?;
        stmts.push((stmt, span));
    }
    resolve(stmts)
}

fn separated(cur: &mut Cursor, sep: &Tok) -> Result<Vec<String>, SyntaxError> {
    let mut out = vec![cur.ident()?.0];
    while cur.eat(sep) {
        out.push(cur.ident()?.0);
    }
    Ok(out)
}

fn resolve(stmts: Vec<(Stmt, Span)>) -> Result<Network, SystemicError> {
    let mut root: Option<String> = None;
    let mut systems: Vec<(String, Vec<String>, Span)> = Vec::new();
    let mut entries: HashMap<String, (Entry, Span)> = HashMap::new();
    let mut set_entry = |system: String, entry: Entry, span: Span| {
        if entries.contains_key(&system) {
            return Err(SystemicError::DuplicateEntry { system, span });
        }
        entries.insert(system, (entry, span));
        Ok(())
    };
    for (stmt, span) in stmts {
        match stmt {
            Stmt::Root(r) => {
                if root.is_some() {
                    return Err(SyntaxError::new(span, "second `root` statement").into());
                }
                root = Some(r);
            }
            Stmt::Choice(name, alts) => {
                if systems.iter().any(|(n, _, _)| *n == name) {
                    return Err(SystemicError::DuplicateSystem { system: name, span });
                }
                let mut seen = BTreeSet::new();
                for a in &alts {
                    let elsewhere = systems.iter().any(|(_, xs, _)| xs.contains(a));
                    if !seen.insert(a.clone()) || elsewhere {
                        return Err(SystemicError::DuplicateAlternative { feature: a.clone(), span });
                    }
                }
                systems.push((name, alts, span));
            }
            Stmt::And(feature, targets) => {
                for t in targets {
                    set_entry(t, Entry::All(vec![feature.clone()]), span)?;
                }
            }
            Stmt::Entry(system, mut entry) => {
                if let Entry::Any(fs) = &mut entry {
                    let mut seen = BTreeSet::new();
                    fs.retain(|f| seen.insert(f.clone()));
                    if fs.len() == 1 {
                        entry = Entry::All(fs.clone());
                    }
                }
                set_entry(system, entry, span)?;
            }
        }
    }
    let root = root.ok_or(SystemicError::MissingRoot)?;

    let features: BTreeSet<&str> = std::iter::once(root.as_str())
        .chain(systems.iter().flat_map(|(_, a, _)| a.iter().map(String::as_str)))
        .collect();
    for (name, _, span) in &systems {
        if features.contains(name.as_str()) {
            return Err(SystemicError::NameClash { name: name.clone(), span: *span });
        }
    }
    for (system, (entry, span)) in &entries {
        if !systems.iter().any(|(n, _, _)| n == system) {
            return Err(SystemicError::UnknownSystem { system: system.clone(), span: *span });
        }
        if let Some(f) = entry.features().iter().find(|f| !features.contains(f.as_str())) {
            return Err(SystemicError::UnknownFeature { feature: f.clone(), span: *span });
        }
    }

    let mut out = Vec::new();
    for (name, alternatives, span) in systems {
        let Some((entry, _)) = entries.remove(&name) else {
            return Err(SystemicError::Unreachable { name, span });
        };
        out.push((System { name, alternatives, entry }, span));
    }

    // a system is reachable once its entry condition can hold
    let mut reached: BTreeSet<String> = BTreeSet::from([root.clone()]);
    let mut entered = vec![false; out.len()];
    loop {
        let mut changed = false;
        for (i, (s, _)) in out.iter().enumerate() {
            let ok = match &s.entry {
                Entry::All(fs) => fs.iter().all(|f| reached.contains(f)),
                Entry::Any(fs) => fs.iter().any(|f| reached.contains(f)),
            };
            if ok && !entered[i] {
                entered[i] = true;
                reached.extend(s.alternatives.iter().cloned());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if let Some(i) = entered.iter().position(|e| !e) {
        let (s, span) = &out[i];
        return Err(SystemicError::Unreachable { name: s.name.clone(), span: *span });
    }
    Ok(Network { root, systems: out.into_iter().map(|(s, _)| s).collect() })
}
