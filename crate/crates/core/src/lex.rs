//! Tokenizer shared by the declaration and network file formats.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Gt,
    Arrow,
    LArrow,
    LBracket,
    RBracket,
    Comma,
    Star,
    Dot,
    Colon,
    Amp,
    Bar,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Gt => ">",
            Tok::Arrow => "->",
            Tok::LArrow => "<-",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Star => "*",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Amp => "&",
            Tok::Bar => "|",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct SyntaxError {
    pub span: Span,
    pub message: String,
}

impl SyntaxError {
    pub fn new(span: Span, message: impl Into<String>) -> SyntaxError {
        SyntaxError { span, message: message.into() }
    }
}

/// Identifiers are `[a-z][A-Za-z0-9_]*`; `%` starts a comment running to end of line.
pub fn tokenize(text: &str) -> Result<Vec<(Tok, Span)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(c) = chars.next() {
        let span = Span { line, column };
        column += 1;
        let tok = match c {
            '\n' => {
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => continue,
            '%' => {
                while chars.next_if(|&c| c != '\n').is_some() {}
                continue;
            }
            '>' => Tok::Gt,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '*' => Tok::Star,
            '.' => Tok::Dot,
            ':' => Tok::Colon,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '-' if chars.next_if_eq(&'>').is_some() => {
                column += 1;
                Tok::Arrow
            }
            '<' if chars.next_if_eq(&'-').is_some() => {
                column += 1;
                Tok::LArrow
            }
            c if c.is_ascii_lowercase() => {
                let mut s = String::from(c);
                while let Some(c) = chars.next_if(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    s.push(c);
                    column += 1;
                }
                Tok::Ident(s)
            }
            c => return Err(SyntaxError::new(span, format!("unexpected character `{c}`"))),
        };
        out.push((tok, span));
    }
    Ok(out)
}

/// Cursor over a token stream with span-carrying errors.
pub(crate) struct Cursor {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    end: Span,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Cursor, SyntaxError> {
        let toks = tokenize(text)?;
        let lines = text.lines().count().max(1);
        let end = Span { line: lines, column: text.lines().last().map_or(1, |l| l.chars().count() + 1) };
        Ok(Cursor { toks, pos: 0, end })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.end, |(_, s)| *s)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn next(&mut self) -> Option<(Tok, Span)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Span, SyntaxError> {
        let span = self.span();
        match self.next() {
            Some((t, _)) if t == *tok => Ok(span),
            Some((t, _)) => Err(SyntaxError::new(span, format!("expected {tok}, found {t}"))),
            None => Err(SyntaxError::new(span, format!("expected {tok}, found end of input"))),
        }
    }

    pub fn ident(&mut self) -> Result<(String, Span), SyntaxError> {
        let span = self.span();
        match self.next() {
            Some((Tok::Ident(s), _)) => Ok((s, span)),
            Some((t, _)) => Err(SyntaxError::new(span, format!("expected identifier, found {t}"))),
            None => Err(SyntaxError::new(span, "expected identifier, found end of input")),
        }
    }
}
