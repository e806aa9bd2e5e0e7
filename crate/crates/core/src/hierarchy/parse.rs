//! Declaration file syntax.
//!
//! ```text
//! decl     := ident ">" dimlist ("*" dimlist)* "."
//!           | ident "intro" "[" feat ("," feat)* "]" "."
//! dimlist  := "[" ident ("," ident)* "]"
//! feat     := ident ":" ident ("&" ident)*
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::lex::{Cursor, Span, SyntaxError, Tok};

/// `parent > [..] * [..].` with one member list per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtypeDecl {
    pub parent: String,
    pub dims: Vec<Vec<String>>,
    pub span: Span,
}

/// One feature from a `T intro [f:C, ...].` declaration, not yet validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureSpec {
    pub feature: String,
    pub introduced_at: String,
    pub restriction: Vec<String>,
    pub span: Span,
}

/// Parsed declarations in source order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeclarationSet {
    pub subtype_decls: Vec<SubtypeDecl>,
    pub feature_decls: Vec<FeatureSpec>,
}

impl DeclarationSet {
    /// Render as declaration text. Dimensions of one parent are merged into a
    /// single product declaration in first-appearance order, which parses back
    /// to the same hierarchy.
    pub fn render(&self) -> String {
        let mut order: Vec<&str> = Vec::new();
        for d in &self.subtype_decls {
            if !order.contains(&d.parent.as_str()) {
                order.push(&d.parent);
            }
        }
        let mut out = String::new();
        for parent in order {
            let dims: Vec<String> = self
                .subtype_decls
                .iter()
                .filter(|d| d.parent == parent)
                .flat_map(|d| d.dims.iter())
                .map(|m| format!("[{}]", m.join(",")))
                .collect();
            let _ = writeln!(out, "{parent} > {}.", dims.join(" * "));
        }
        let mut intro: Vec<&str> = Vec::new();
        for f in &self.feature_decls {
            if !intro.contains(&f.introduced_at.as_str()) {
                intro.push(&f.introduced_at);
            }
        }
        for t in intro {
            let feats: Vec<String> = self
                .feature_decls
                .iter()
                .filter(|f| f.introduced_at == t)
                .map(|f| format!("{}:{}", f.feature, f.restriction.join(" & ")))
                .collect();
            let _ = writeln!(out, "{t} intro [{}].", feats.join(", "));
        }
        out
    }
}

pub fn parse_declarations(text: &str) -> Result<DeclarationSet, SyntaxError> {
    let mut cur = Cursor::new(text)?;
    let mut set = DeclarationSet::default();
    while !cur.at_end() {
        let (head, span) = cur.ident()?;
        match cur.peek() {
            Some(Tok::Gt) => {
                cur.next();
                let mut dims = vec![dimlist(&mut cur)?];
                while cur.eat(&Tok::Star) {
                    dims.push(dimlist(&mut cur)?);
                }
                cur.expect(&Tok::Dot)?;
                set.subtype_decls.push(SubtypeDecl { parent: head, dims, span });
            }
            Some(Tok::Ident(kw)) if kw == "intro" => {
                cur.next();
                cur.expect(&Tok::LBracket)?;
                if cur.peek() == Some(&Tok::RBracket) {
                    return Err(SyntaxError::new(cur.span(), "empty feature list"));
                }
                loop {
                    let (feature, fspan) = cur.ident()?;
                    cur.expect(&Tok::Colon)?;
                    let mut restriction = vec![cur.ident()?.0];
                    while cur.eat(&Tok::Amp) {
                        restriction.push(cur.ident()?.0);
                    }
                    set.feature_decls.push(FeatureSpec {
                        feature,
                        introduced_at: head.clone(),
                        restriction,
                        span: fspan,
                    });
                    if !cur.eat(&Tok::Comma) {
                        break;
                    }
                }
                cur.expect(&Tok::RBracket)?;
                cur.expect(&Tok::Dot)?;
            }
            Some(t) => {
                return Err(SyntaxError::new(cur.span(), format!("expected `>` or `intro`, found {t}")));
            }
            None => return Err(SyntaxError::new(cur.span(), "expected `>` or `intro`, found end of input")),
        }
    }
    Ok(set)
}

fn dimlist(cur: &mut Cursor) -> Result<Vec<String>, SyntaxError> {
    let open = cur.expect(&Tok::LBracket)?;
    if cur.peek() == Some(&Tok::RBracket) {
        return Err(SyntaxError::new(open, "empty dimension"));
    }
    let mut members = Vec::new();
    let mut seen = HashSet::new();
    loop {
        let (name, span) = cur.ident()?;
        if !seen.insert(name.clone()) {
            return Err(SyntaxError::new(span, format!("duplicate type `{name}` in dimension")));
        }
        members.push(name);
        if !cur.eat(&Tok::Comma) {
            break;
        }
    }
    cur.expect(&Tok::RBracket)?;
    Ok(members)
}
