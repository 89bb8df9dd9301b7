//! Lexer and recursive-descent parser for program and hypothesis files.
//!
//! ```text
//! fact    := atom "=" value "."
//! rule    := atom "<-" formula "."
//! formula := quant | plus
//! quant   := ("exists" | "forall") VAR formula
//! plus    := times ("(+)" times)*
//! times   := or ("(*)" or)*
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" atom | quant | atom | value | "(" formula ")"
//! ```
//!
//! `%` starts a comment that runs to the end of the line.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{Atom, Clause, Fact, Formula, GroundAtom, Pos, Program, Quantifier, Symbol, Term};
use crate::bilattice::{Bilattice, BilatticeError, BinOp, Four, TruthValue};

/// A sparse valuation read from a hypothesis file.
pub type Assignment = BTreeMap<GroundAtom, TruthValue>;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{pos}: {kind}")]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("function symbol `{0}` in argument position; terms must be constants or variables")]
    FunctionSymbol(String),
    #[error(transparent)]
    Value(#[from] BilatticeError),
    #[error("negation is not available in bilattice {0}")]
    NoNegation(Bilattice),
    #[error("fact `{0}` is not ground")]
    NonGroundFact(String),
    #[error("`{atom}` is given conflicting values {first} and {second}")]
    Conflict {
        atom: GroundAtom,
        first: TruthValue,
        second: TruthValue,
    },
    #[error("hypothesis files contain `atom = value.` lines only")]
    RuleInHypothesis,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Number(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Arrow,
    Tilde,
    Amp,
    Bar,
    Plus,
    Times,
    Lt,
    Gt,
    LBracket,
    RBracket,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Number(s) => return write!(f, "`{s}`"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Eq => "=",
            Tok::Arrow => "<-",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Plus => "(+)",
            Tok::Times => "(*)",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i, &mut col),
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' if chars.get(i + 1) == Some(&'+') && chars.get(i + 2) == Some(&')') => {
                out.push((Tok::Plus, pos));
                advance(3, &mut i, &mut col);
            }
            '(' if chars.get(i + 1) == Some(&'*') && chars.get(i + 2) == Some(&')') => {
                out.push((Tok::Times, pos));
                advance(3, &mut i, &mut col);
            }
            '<' if chars.get(i + 1) == Some(&'-') => {
                out.push((Tok::Arrow, pos));
                advance(2, &mut i, &mut col);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                if c.is_ascii_lowercase() {
                    out.push((Tok::Ident(word), pos));
                } else {
                    out.push((Tok::Var(word), pos));
                }
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                col += i - start;
                out.push((Tok::Number(chars[start..i].iter().collect()), pos));
            }
            _ => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    '=' => Tok::Eq,
                    '~' => Tok::Tilde,
                    '&' => Tok::Amp,
                    '|' => Tok::Bar,
                    '<' => Tok::Lt,
                    '>' => Tok::Gt,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    other => {
                        return Err(ParseError {
                            pos,
                            kind: ParseErrorKind::Syntax(format!("unexpected character `{other}`")),
                        })
                    }
                };
                out.push((tok, pos));
                advance(1, &mut i, &mut col);
            }
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

enum Statement {
    Fact(Fact),
    Rule(Clause),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    bilattice: Bilattice,
}

impl Parser {
    fn new(text: &str, bilattice: Bilattice) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            bilattice,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, pos: Pos, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { pos, kind })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.error(
            self.pos(),
            ParseErrorKind::Syntax(format!("expected {wanted}, found {}", self.peek())),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.unexpected(&tok.to_string())
        }
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let pos = self.pos();
        let head = self.atom()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                let value = self.value()?;
                self.expect(Tok::Dot)?;
                let atom = head.to_ground().ok_or_else(|| ParseError {
                    pos,
                    kind: ParseErrorKind::NonGroundFact(head.to_string()),
                })?;
                Ok(Statement::Fact(Fact { atom, value, pos }))
            }
            Tok::Arrow => {
                self.bump();
                let body = self.formula()?;
                self.expect(Tok::Dot)?;
                Ok(Statement::Rule(Clause { head, body, pos }))
            }
            _ => self.unexpected("`=` or `<-`"),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let (tok, pos) = self.bump();
        let name = match tok {
            Tok::Ident(n) if n != "exists" && n != "forall" => n,
            other => return self.error(pos, ParseErrorKind::Syntax(format!("expected an atom, found {other}"))),
        };
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                let (tok, tpos) = self.bump();
                match tok {
                    Tok::Ident(c) => {
                        if *self.peek() == Tok::LParen {
                            return self.error(tpos, ParseErrorKind::FunctionSymbol(c));
                        }
                        args.push(Term::Const(Symbol::new(&c)));
                    }
                    Tok::Var(v) => args.push(Term::Var(Symbol::new(&v))),
                    other => {
                        return self.error(
                            tpos,
                            ParseErrorKind::Syntax(format!("expected a constant or variable, found {other}")),
                        )
                    }
                }
                match self.bump() {
                    (Tok::Comma, _) => continue,
                    (Tok::RParen, _) => break,
                    (other, p) => {
                        return self.error(p, ParseErrorKind::Syntax(format!("expected `,` or `)`, found {other}")))
                    }
                }
            }
        }
        Ok(Atom {
            predicate: Symbol::new(&name),
            args,
        })
    }

    fn level_text(&mut self) -> Result<String, ParseError> {
        match self.bump() {
            (Tok::Number(n), _) | (Tok::Ident(n), _) => Ok(n),
            (other, p) => self.error(p, ParseErrorKind::Syntax(format!("expected a level, found {other}"))),
        }
    }

    fn value(&mut self) -> Result<TruthValue, ParseError> {
        let pos = self.pos();
        let wrap = |e: BilatticeError| ParseError {
            pos,
            kind: ParseErrorKind::Value(e),
        };
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                let mut chars = v.chars();
                match (chars.next().and_then(Four::from_symbol), chars.next()) {
                    (Some(named), None) => Ok(self.bilattice.named(named)),
                    _ => self.error(
                        pos,
                        ParseErrorKind::Syntax(format!("expected a value (T, F, U, O, <b,d> or [lo,hi]), found `{v}`")),
                    ),
                }
            }
            Tok::Lt => {
                self.bump();
                let b = self.level_text()?;
                self.expect(Tok::Comma)?;
                let d = self.level_text()?;
                self.expect(Tok::Gt)?;
                self.bilattice.pair(&b, &d).map_err(wrap)
            }
            Tok::LBracket => {
                self.bump();
                let lo = self.level_text()?;
                self.expect(Tok::Comma)?;
                let hi = self.level_text()?;
                self.expect(Tok::RBracket)?;
                self.bilattice.interval(&lo, &hi).map_err(wrap)
            }
            _ => self.unexpected("a value"),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if let Some(q) = self.quantifier_keyword() {
            return self.quantified(q);
        }
        self.binary_level(1)
    }

    fn quantifier_keyword(&self) -> Option<Quantifier> {
        match self.peek() {
            Tok::Ident(k) if k == "exists" => Some(Quantifier::Exists),
            Tok::Ident(k) if k == "forall" => Some(Quantifier::Forall),
            _ => None,
        }
    }

    fn quantified(&mut self, q: Quantifier) -> Result<Formula, ParseError> {
        self.bump();
        let var = match self.bump() {
            (Tok::Var(v), _) => Symbol::new(&v),
            (other, p) => {
                return self.error(
                    p,
                    ParseErrorKind::Syntax(format!("expected a variable after quantifier, found {other}")),
                )
            }
        };
        let body = self.formula()?;
        Ok(Formula::Quant(q, var, Box::new(body)))
    }

    fn op_at(&self, level: u8) -> Option<BinOp> {
        let op = match self.peek() {
            Tok::Plus => BinOp::Gullibility,
            Tok::Times => BinOp::Consensus,
            Tok::Bar => BinOp::Or,
            Tok::Amp => BinOp::And,
            _ => return None,
        };
        (super::op_prec(op) == level).then_some(op)
    }

    fn binary_level(&mut self, level: u8) -> Result<Formula, ParseError> {
        if level == super::ATOMIC {
            return self.unary();
        }
        let mut left = self.binary_level(level + 1)?;
        while let Some(op) = self.op_at(level) {
            self.bump();
            let right = self.binary_level(level + 1)?;
            left = Formula::binary(op, left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if let Some(q) = self.quantifier_keyword() {
            return self.quantified(q);
        }
        match self.peek().clone() {
            Tok::Tilde => {
                let pos = self.bump().1;
                if !self.bilattice.has_negation() {
                    return self.error(pos, ParseErrorKind::NoNegation(self.bilattice));
                }
                match self.peek() {
                    Tok::Ident(_) => Ok(Formula::NegAtom(self.atom()?)),
                    _ => self.unexpected("an atom after `~` (negation applies to atoms only)"),
                }
            }
            Tok::Ident(_) => Ok(Formula::Atom(self.atom()?)),
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Var(_) | Tok::Lt | Tok::LBracket => Ok(Formula::Const(self.value()?)),
            _ => self.unexpected("a formula"),
        }
    }
}

fn insert_fact(facts: &mut Assignment, fact: &Fact) -> Result<bool, ParseError> {
    match facts.get(&fact.atom) {
        Some(&first) if first != fact.value => Err(ParseError {
            pos: fact.pos,
            kind: ParseErrorKind::Conflict {
                atom: fact.atom.clone(),
                first,
                second: fact.value,
            },
        }),
        Some(_) => Ok(false),
        None => {
            facts.insert(fact.atom.clone(), fact.value);
            Ok(true)
        }
    }
}

/// Parses a program file. Repeated identical facts are kept once; a fact
/// given two different values is an error.
pub fn parse_program(text: &str, bilattice: Bilattice) -> Result<Program, ParseError> {
    let mut p = Parser::new(text, bilattice)?;
    let mut program = Program::new(bilattice);
    let mut seen = Assignment::new();
    while !p.at_eof() {
        match p.statement()? {
            Statement::Fact(fact) => {
                if insert_fact(&mut seen, &fact)? {
                    program.facts.push(fact);
                }
            }
            Statement::Rule(rule) => program.rules.push(rule),
        }
    }
    Ok(program)
}

/// Parses a hypothesis file: ground `atom = value.` lines only. Atoms not
/// listed are underdefined.
pub fn parse_hypothesis(text: &str, bilattice: Bilattice) -> Result<Assignment, ParseError> {
    let mut p = Parser::new(text, bilattice)?;
    let mut out = Assignment::new();
    while !p.at_eof() {
        match p.statement()? {
            Statement::Fact(fact) => {
                insert_fact(&mut out, &fact)?;
            }
            Statement::Rule(rule) => {
                return Err(ParseError {
                    pos: rule.pos,
                    kind: ParseErrorKind::RuleInHypothesis,
                })
            }
        }
    }
    Ok(out)
}

pub(super) fn parse_ground_atom(text: &str) -> Result<GroundAtom, ParseError> {
    let mut p = Parser::new(text, Bilattice::Four)?;
    let pos = p.pos();
    let atom = p.atom()?;
    if !p.at_eof() {
        return p.unexpected("end of input");
    }
    atom.to_ground().ok_or_else(|| ParseError {
        pos,
        kind: ParseErrorKind::NonGroundFact(atom.to_string()),
    })
}

#[cfg(test)]
impl Parser {
    fn formula_only(text: &str, bilattice: Bilattice) -> Result<Formula, ParseError> {
        let mut p = Parser::new(text, bilattice)?;
        let f = p.formula()?;
        if !p.at_eof() {
            return p.unexpected("end of input");
        }
        Ok(f)
    }
}
