//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula := implies
//! implies := or ( "->" implies )?
//! or      := and ( "|" and )*
//! and     := not ( "&" not )*
//! not     := "~" not | atom | "(" formula ")"
//! atom    := [a-z][a-z0-9_]*
//! ```
//!
//! The Unicode connectives `¬ ∧ ∨ →` are accepted as aliases on input.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{FormulaId, FormulaStore};

/// A terminal the parser was prepared to accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expected {
    Atom,
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    EndOfInput,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expected::Atom => "atom",
            Expected::Not => "`~`",
            Expected::And => "`&`",
            Expected::Or => "`|`",
            Expected::Implies => "`->`",
            Expected::LParen => "`(`",
            Expected::RParen => "`)`",
            Expected::EndOfInput => "end of input",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {found}, expected {}", join_expected(.expected))]
pub struct ParseError {
    /// Byte offset of the offending token (or `text.len()` at end of input).
    pub offset: usize,
    pub expected: BTreeSet<Expected>,
    /// Short description of what was found instead.
    pub found: String,
}

fn join_expected(expected: &BTreeSet<Expected>) -> String {
    let items: Vec<String> = expected.iter().map(ToString::to_string).collect();
    match items.len() {
        0 => "nothing".to_string(),
        1 => items[0].clone(),
        _ => format!("one of {}", items.join(", ")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Atom(&'a str),
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    End,
    Invalid(char),
}

impl Tok<'_> {
    fn describe(self) -> String {
        match self {
            Tok::Atom(name) => format!("atom `{name}`"),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
            Tok::Invalid(c) => format!("unexpected character {c:?}"),
        }
    }
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the next token, its offset, and its byte length.
    fn peek(&mut self) -> (Tok<'a>, usize, usize) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let Some(c) = rest.chars().next() else {
            return (Tok::End, start, 0);
        };
        let (tok, len) = match c {
            '~' | '¬' => (Tok::Not, c.len_utf8()),
            '&' | '∧' => (Tok::And, c.len_utf8()),
            '|' | '∨' => (Tok::Or, c.len_utf8()),
            '→' => (Tok::Implies, c.len_utf8()),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '-' if rest.as_bytes().get(1) == Some(&b'>') => (Tok::Implies, 2),
            'a'..='z' => {
                let len = rest
                    .bytes()
                    .position(|b| !matches!(b, b'a'..=b'z' | b'0'..=b'9' | b'_'))
                    .unwrap_or(rest.len());
                (Tok::Atom(&rest[..len]), len)
            }
            other => (Tok::Invalid(other), other.len_utf8()),
        };
        (tok, start, len)
    }

    fn bump(&mut self, len: usize) {
        self.pos += len;
    }
}

struct Parser<'a, 's> {
    lexer: Lexer<'a>,
    store: &'s mut FormulaStore,
}

impl Parser<'_, '_> {
    fn error(&mut self, expected: &[Expected]) -> ParseError {
        let (tok, offset, _) = self.lexer.peek();
        ParseError {
            offset,
            expected: expected.iter().copied().collect(),
            found: tok.describe(),
        }
    }

    fn eat(&mut self, want: Tok<'_>) -> bool {
        let (tok, _, len) = self.lexer.peek();
        if tok == want {
            self.lexer.bump(len);
            true
        } else {
            false
        }
    }

    fn implies(&mut self) -> Result<FormulaId, ParseError> {
        let left = self.or()?;
        if self.eat(Tok::Implies) {
            let right = self.implies()?;
            Ok(self.store.implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<FormulaId, ParseError> {
        let mut acc = self.and()?;
        while self.eat(Tok::Or) {
            let right = self.and()?;
            acc = self.store.or(acc, right);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<FormulaId, ParseError> {
        let mut acc = self.not()?;
        while self.eat(Tok::And) {
            let right = self.not()?;
            acc = self.store.and(acc, right);
        }
        Ok(acc)
    }

    fn not(&mut self) -> Result<FormulaId, ParseError> {
        let (tok, _, len) = self.lexer.peek();
        match tok {
            Tok::Not => {
                self.lexer.bump(len);
                let child = self.not()?;
                Ok(self.store.not(child))
            }
            Tok::Atom(name) => {
                self.lexer.bump(len);
                Ok(self
                    .store
                    .atom(name)
                    .expect("lexer only yields well-formed atom names"))
            }
            Tok::LParen => {
                self.lexer.bump(len);
                let inner = self.implies()?;
                if !self.eat(Tok::RParen) {
                    return Err(self.error(&[
                        Expected::And,
                        Expected::Or,
                        Expected::Implies,
                        Expected::RParen,
                    ]));
                }
                Ok(inner)
            }
            _ => Err(self.error(&[Expected::Not, Expected::Atom, Expected::LParen])),
        }
    }
}

/// Parses `text` and interns the result into `store`.
///
/// On error the store may contain interned subformulas of the valid prefix;
/// this is harmless because the store is append-only.
pub fn parse(text: &str, store: &mut FormulaStore) -> Result<FormulaId, ParseError> {
    let mut parser = Parser {
        lexer: Lexer { text, pos: 0 },
        store,
    };
    let id = parser.implies()?;
    if parser.lexer.peek().0 != Tok::End {
        return Err(parser.error(&[
            Expected::And,
            Expected::Or,
            Expected::Implies,
            Expected::EndOfInput,
        ]));
    }
    Ok(id)
}
