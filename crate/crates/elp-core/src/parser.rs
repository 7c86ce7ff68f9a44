//! Text format for ground programs.
//!
//! ```text
//! rule    := head? (":-" body)? "."
//! head    := lit (("|" | "or") lit)*
//! body    := elem ("," elem)*
//! elem    := ("not" ("not")?)? (("K" | "M") lit | lit)
//! lit     := "-"? ident ("(" const ("," const)* ")")?
//! const   := ident | integer
//! ```
//!
//! Identifiers start with a lowercase letter; `%` starts a comment that
//! runs to end of line. Uppercase identifiers other than the modal
//! operators `K` and `M` are variables and rejected: programs must be
//! ground. `not`, `or`, and the bare names `k` and `m` are reserved.
//! `not not` before an objective literal is accepted only when parsing
//! plain ASP; it never applies to subjective atoms.

use std::fmt;

use thiserror::Error;

use crate::model::{
    Atom, BodyElement, Constant, Modality, ObjectiveLiteral, Program, Rule, SubjectiveAtom,
};

/// 1-based position of a token in the input text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    fn new(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseError {
            message: message.into(),
            span,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmitError {
    #[error("cannot emit subjective literal {0} as plain ASP")]
    SubjectiveLiteral(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Variable(String),
    K,
    M,
    Not,
    Or,
    Dash,
    Pipe,
    Arrow,
    Comma,
    Dot,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    span: SourceSpan,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    let mut column = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let span = SourceSpan { line, column };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '-' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::Dash,
                    span,
                });
            }
            '|' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::Pipe,
                    span,
                });
            }
            ',' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::Comma,
                    span,
                });
            }
            '.' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::Dot,
                    span,
                });
            }
            '(' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::LParen,
                    span,
                });
            }
            ')' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::RParen,
                    span,
                });
            }
            ':' => {
                bump!();
                if chars.peek() == Some(&'-') {
                    bump!();
                    out.push(Spanned {
                        tok: Tok::Arrow,
                        span,
                    });
                } else {
                    return Err(ParseError::new("expected '-' after ':'", span));
                }
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Int(s),
                    span,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                let tok = match s.as_str() {
                    "K" => Tok::K,
                    "M" => Tok::M,
                    "not" => Tok::Not,
                    "or" => Tok::Or,
                    _ if s.starts_with(|c: char| c.is_ascii_uppercase() || c == '_') => {
                        Tok::Variable(s)
                    }
                    _ => Tok::Ident(s),
                };
                out.push(Spanned { tok, span });
            }
            other => {
                return Err(ParseError::new(
                    format!("unexpected character '{other}'"),
                    span,
                ));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Elp,
    Asp,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    mode: Mode,
    end: SourceSpan,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn span(&self) -> SourceSpan {
        self.toks.get(self.pos).map(|s| s.span).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let span = self.span();
        match self.next() {
            Some(t) if t == tok => Ok(()),
            _ => Err(ParseError::new(format!("expected {what}"), span)),
        }
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(message, self.span())
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut rules = Vec::new();
        while self.peek().is_some() {
            rules.push(self.rule()?);
        }
        Ok(Program::new(rules))
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let mut head = Vec::new();
        if !matches!(self.peek(), Some(Tok::Arrow)) {
            head.push(self.literal()?);
            while matches!(self.peek(), Some(Tok::Pipe) | Some(Tok::Or)) {
                self.next();
                head.push(self.literal()?);
            }
        }
        let mut body = Vec::new();
        if matches!(self.peek(), Some(Tok::Arrow)) {
            self.next();
            body.push(self.element()?);
            while matches!(self.peek(), Some(Tok::Comma)) {
                self.next();
                body.push(self.element()?);
            }
        }
        if head.is_empty() && body.is_empty() {
            return Err(self.err_here("expected rule"));
        }
        self.expect(Tok::Dot, "'.'")?;
        Ok(Rule::new(head, body))
    }

    fn element(&mut self) -> Result<BodyElement, ParseError> {
        let start = self.span();
        let mut depth = 0u8;
        while matches!(self.peek(), Some(Tok::Not)) {
            if depth == 2 {
                return Err(self.err_here("more than two 'not' in a row"));
            }
            self.next();
            depth += 1;
        }
        match self.peek() {
            Some(Tok::K) | Some(Tok::M) => {
                let modality = if matches!(self.next(), Some(Tok::K)) {
                    Modality::K
                } else {
                    Modality::M
                };
                if depth > 1 {
                    return Err(ParseError::new(
                        "'not not' before subjective literal",
                        start,
                    ));
                }
                if self.mode == Mode::Asp {
                    return Err(ParseError::new("subjective literal in ASP program", start));
                }
                let literal = self.literal()?;
                Ok(BodyElement::subjective(
                    SubjectiveAtom { modality, literal },
                    depth,
                ))
            }
            _ => {
                if depth > 1 && self.mode == Mode::Elp {
                    return Err(ParseError::new(
                        "'not not' before an objective literal requires ASP mode",
                        start,
                    ));
                }
                let literal = self.literal()?;
                Ok(BodyElement::objective(literal, depth))
            }
        }
    }

    fn literal(&mut self) -> Result<ObjectiveLiteral, ParseError> {
        let strong_neg = if matches!(self.peek(), Some(Tok::Dash)) {
            self.next();
            true
        } else {
            false
        };
        let span = self.span();
        let name = match self.next() {
            Some(Tok::Ident(s)) => s,
            Some(Tok::Variable(v)) => {
                return Err(ParseError::new(
                    format!("variable '{v}' in ground program"),
                    span,
                ));
            }
            _ => return Err(ParseError::new("expected atom", span)),
        };
        if name == "k" || name == "m" {
            return Err(ParseError::new(
                format!("atom name '{name}' is reserved"),
                span,
            ));
        }
        let mut args = Vec::new();
        if matches!(self.peek(), Some(Tok::LParen)) {
            self.next();
            args.push(self.constant()?);
            while matches!(self.peek(), Some(Tok::Comma)) {
                self.next();
                args.push(self.constant()?);
            }
            self.expect(Tok::RParen, "')'")?;
        }
        Ok(ObjectiveLiteral {
            atom: Atom::new(name, args),
            strong_neg,
        })
    }

    fn constant(&mut self) -> Result<Constant, ParseError> {
        let span = self.span();
        match self.next() {
            Some(Tok::Ident(s)) | Some(Tok::Int(s)) => Ok(Constant(s)),
            Some(Tok::Variable(v)) => Err(ParseError::new(
                format!("variable '{v}' in ground program"),
                span,
            )),
            _ => Err(ParseError::new("expected constant", span)),
        }
    }
}

fn parse(text: &str, mode: Mode) -> Result<Program, ParseError> {
    let toks = lex(text)?;
    let lines = text.lines().count().max(1);
    let end = SourceSpan {
        line: lines,
        column: text.lines().last().map_or(1, |l| l.len() + 1),
    };
    Parser {
        toks,
        pos: 0,
        mode,
        end,
    }
    .program()
}

/// Parse an epistemic logic program.
pub fn parse_elp(text: &str) -> Result<Program, ParseError> {
    parse(text, Mode::Elp)
}

/// Parse a plain ASP program: subjective literals are rejected, doubled
/// default negation on objective literals is allowed.
pub fn parse_asp(text: &str) -> Result<Program, ParseError> {
    parse(text, Mode::Asp)
}

/// Render an ASP program in the same syntax [`parse_asp`] accepts.
pub fn emit_asp(p: &Program) -> Result<String, EmitError> {
    for r in p.rules() {
        for e in r.body() {
            if let BodyElement::Subjective { atom, .. } = e {
                return Err(EmitError::SubjectiveLiteral(atom.to_string()));
            }
        }
    }
    Ok(p.to_string())
}
