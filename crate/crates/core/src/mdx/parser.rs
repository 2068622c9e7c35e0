//! Recursive-descent parser for the MDX subset:
//!
//! ```text
//! query   := SELECT axis ("," axis)* [","] FROM cube [WHERE slicer] EOF
//! axis    := set ON label
//! set     := "{" [path ("," path)*] "}" | path
//! slicer  := group (AND group)*
//! group   := "{" term ("," term)* "}" | "(" term ("," term)* ")" | term
//! term    := path [operator path]
//! path    := name ("." name)*
//! ```
//!
//! Keywords are case-insensitive; bracketed names keep their spelling.

use std::collections::HashSet;

use thiserror::Error;

use super::ast::{Axis, AxisLabel, MemberPath, QueryAst, SlicerTerm};
use super::lexer::{tokenize, LexError, Pos, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty query")]
    Empty,
    #[error("{line}:{column}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{column}: unknown axis label `{label}`")]
    UnknownAxis {
        line: usize,
        column: usize,
        label: String,
    },
    #[error("{line}:{column}: axis {label} appears twice")]
    DuplicateAxis {
        line: usize,
        column: usize,
        label: String,
    },
    #[error("{line}:{column}: unbalanced `{delimiter}`")]
    Unbalanced {
        line: usize,
        column: usize,
        delimiter: char,
    },
    #[error("{line}:{column}: unexpected character `{ch}`")]
    UnexpectedChar {
        line: usize,
        column: usize,
        ch: char,
    },
}

pub fn parse_query(text: &str) -> Result<QueryAst, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let tokens = tokenize(text).map_err(|e| match e {
        LexError::UnterminatedBracket(p) => ParseError::Unbalanced {
            line: p.line,
            column: p.column,
            delimiter: '[',
        },
        LexError::UnexpectedChar(ch, p) => ParseError::UnexpectedChar {
            line: p.line,
            column: p.column,
            ch,
        },
    })?;
    check_balance(&tokens)?;
    Parser { tokens, at: 0 }.query()
}

fn check_balance(tokens: &[(Tok, Pos)]) -> Result<(), ParseError> {
    let mut stack: Vec<(char, Pos)> = Vec::new();
    for (tok, pos) in tokens {
        let close = match tok {
            Tok::LBrace => {
                stack.push(('{', *pos));
                continue;
            }
            Tok::LParen => {
                stack.push(('(', *pos));
                continue;
            }
            Tok::RBrace => ('{', '}'),
            Tok::RParen => ('(', ')'),
            _ => continue,
        };
        match stack.pop() {
            Some((open, _)) if open == close.0 => {}
            _ => {
                return Err(ParseError::Unbalanced {
                    line: pos.line,
                    column: pos.column,
                    delimiter: close.1,
                })
            }
        }
    }
    match stack.pop() {
        Some((open, p)) => Err(ParseError::Unbalanced {
            line: p.line,
            column: p.column,
            delimiter: open,
        }),
        None => Ok(()),
    }
}

struct Parser {
    tokens: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].1
    }

    fn advance(&mut self) -> Tok {
        let t = self.tokens[self.at].0.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let p = self.pos();
        ParseError::Syntax {
            line: p.line,
            column: p.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_keyword(kw) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&[kw]))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn query(mut self) -> Result<QueryAst, ParseError> {
        self.keyword("SELECT")?;
        let mut axes = Vec::new();
        let mut seen = HashSet::new();
        loop {
            let axis = self.axis()?;
            if !seen.insert(axis.0.label) {
                let p = axis.1;
                return Err(ParseError::DuplicateAxis {
                    line: p.line,
                    column: p.column,
                    label: axis.0.label.as_str().to_string(),
                });
            }
            axes.push(axis.0);
            if self.eat(&Tok::Comma) {
                if self.is_keyword("FROM") {
                    break;
                }
                continue;
            }
            break;
        }
        self.keyword("FROM")?;
        let cube_name = match self.peek().clone() {
            Tok::Name(n) | Tok::Word(n) if !n.is_empty() => {
                self.advance();
                n
            }
            _ => return Err(self.error(&["cube name"])),
        };
        let mut slicer = Vec::new();
        if self.is_keyword("WHERE") {
            self.advance();
            loop {
                self.slicer_group(&mut slicer)?;
                if self.is_keyword("AND") {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        if *self.peek() != Tok::Eof {
            let expected: &[&str] = if slicer.is_empty() {
                &["WHERE", "end of input"]
            } else {
                &["AND", "end of input"]
            };
            return Err(self.error(expected));
        }
        Ok(QueryAst {
            cube_name,
            axes,
            slicer,
        })
    }

    fn axis(&mut self) -> Result<(Axis, Pos), ParseError> {
        let members = self.set()?;
        self.keyword("ON")?;
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Word(w) => match AxisLabel::from_keyword(&w) {
                Some(label) => {
                    self.advance();
                    Ok((Axis { label, members }, pos))
                }
                None => Err(ParseError::UnknownAxis {
                    line: pos.line,
                    column: pos.column,
                    label: w,
                }),
            },
            _ => Err(self.error(&["axis label"])),
        }
    }

    fn set(&mut self) -> Result<Vec<MemberPath>, ParseError> {
        match self.peek() {
            Tok::LBrace => {
                self.advance();
                let mut members = Vec::new();
                if self.eat(&Tok::RBrace) {
                    return Ok(members);
                }
                loop {
                    members.push(self.path()?);
                    if self.eat(&Tok::Comma) {
                        continue;
                    }
                    if self.eat(&Tok::RBrace) {
                        return Ok(members);
                    }
                    return Err(self.error(&["`,`", "`}`"]));
                }
            }
            Tok::Name(_) => Ok(vec![self.path()?]),
            _ => Err(self.error(&["`{`", "member"])),
        }
    }

    fn slicer_group(&mut self, out: &mut Vec<SlicerTerm>) -> Result<(), ParseError> {
        let close = match self.peek() {
            Tok::LBrace => Tok::RBrace,
            Tok::LParen => Tok::RParen,
            Tok::Name(_) => {
                out.push(self.term()?);
                return Ok(());
            }
            _ => return Err(self.error(&["`{`", "`(`", "member"])),
        };
        self.advance();
        loop {
            out.push(self.term()?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            if self.eat(&close) {
                return Ok(());
            }
            let closing = if close == Tok::RBrace { "`}`" } else { "`)`" };
            return Err(self.error(&["`,`", "spatial operator", closing]));
        }
    }

    fn term(&mut self) -> Result<SlicerTerm, ParseError> {
        let left = self.path()?;
        if let Tok::Word(w) = self.peek() {
            if !w.eq_ignore_ascii_case("AND") {
                let operator = w.clone();
                self.advance();
                let right = self.path()?;
                return Ok(SlicerTerm::SpatialOp {
                    left,
                    operator,
                    right,
                });
            }
        }
        Ok(match left.measure_name() {
            Some(m) => SlicerTerm::Measure(m.to_string()),
            None => SlicerTerm::Member(left),
        })
    }

    fn path(&mut self) -> Result<MemberPath, ParseError> {
        let mut segments = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Name(n) if !n.is_empty() => {
                    self.advance();
                    segments.push(n);
                }
                Tok::Name(_) => return Err(self.error(&["non-empty member name"])),
                _ => return Err(self.error(&["member"])),
            }
            if !self.eat(&Tok::Dot) {
                return Ok(MemberPath { segments });
            }
        }
    }
}
