//! Fitting programs: syntax tree, parser and grounder.
//!
//! A program is a pair of facts (ground atoms with a value) and rules
//! `head <- body`, whose bodies are built from literals and bilattice
//! constants with `&`, `|`, `(*)`, `(+)`, `exists` and `forall`.

mod ground;
mod parser;

use std::fmt;
use std::sync::Arc;

use crate::bilattice::{Bilattice, BinOp, TruthValue};

pub use ground::{ground, GroundError, GroundProgram, HerbrandBase};
pub use parser::{parse_hypothesis, parse_program, Assignment, ParseError, ParseErrorKind};

/// An interned-by-refcount identifier: a constant, variable or predicate name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(name: &str) -> Self {
        Symbol::new(name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Source position, 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Symbol),
    Var(Symbol),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(s) | Term::Var(s) => write!(f, "{s}"),
        }
    }
}

/// A possibly non-ground atom `p(t1, ..., tn)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom {
            predicate: Symbol::new(predicate),
            args,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Symbol> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        })
    }

    pub fn to_ground(&self) -> Option<GroundAtom> {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(_) => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom {
            predicate: self.predicate.clone(),
            args,
        })
    }

    /// Instantiates the atom under `env` (innermost binding last). Returns the
    /// first unbound variable on failure.
    pub fn substitute(&self, env: &[(Symbol, Symbol)]) -> Result<GroundAtom, Symbol> {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => Ok(c.clone()),
                Term::Var(v) => env
                    .iter()
                    .rev()
                    .find(|(name, _)| name == v)
                    .map(|(_, c)| c.clone())
                    .ok_or_else(|| v.clone()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroundAtom {
            predicate: self.predicate.clone(),
            args,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        write_args(f, &self.args)
    }
}

fn write_args<T: fmt::Display>(f: &mut fmt::Formatter<'_>, args: &[T]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

/// A variable-free atom, element of the Herbrand base.
///
/// Ordering is by predicate name, then argument list, which is the order
/// every report prints atoms in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: Symbol,
    pub args: Vec<Symbol>,
}

impl GroundAtom {
    pub fn new(predicate: &str, args: &[&str]) -> Self {
        GroundAtom {
            predicate: Symbol::new(predicate),
            args: args.iter().map(|a| Symbol::new(a)).collect(),
        }
    }

    /// Parses `p` or `p(a,b)`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parser::parse_ground_atom(text)
    }
}

impl std::str::FromStr for GroundAtom {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        GroundAtom::parse(text)
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        write_args(f, &self.args)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// A rule body. Negation only ever applies to atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    NegAtom(Atom),
    Const(TruthValue),
    Binary(BinOp, Box<Formula>, Box<Formula>),
    Quant(Quantifier, Symbol, Box<Formula>),
}

impl Formula {
    pub fn binary(op: BinOp, left: Formula, right: Formula) -> Self {
        Formula::Binary(op, Box::new(left), Box::new(right))
    }

    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<Symbol> {
        fn walk(f: &Formula, bound: &mut Vec<Symbol>, out: &mut Vec<Symbol>) {
            match f {
                Formula::Atom(a) | Formula::NegAtom(a) => {
                    for v in a.vars() {
                        if !bound.contains(v) && !out.contains(v) {
                            out.push(v.clone());
                        }
                    }
                }
                Formula::Const(_) => {}
                Formula::Binary(_, l, r) => {
                    walk(l, bound, out);
                    walk(r, bound, out);
                }
                Formula::Quant(_, v, body) => {
                    bound.push(v.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn visit_atoms<'a>(&'a self, visit: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::Atom(a) | Formula::NegAtom(a) => visit(a),
            Formula::Const(_) => {}
            Formula::Binary(_, l, r) => {
                l.visit_atoms(visit);
                r.visit_atoms(visit);
            }
            Formula::Quant(_, _, body) => body.visit_atoms(visit),
        }
    }

    pub(crate) fn has_quantifier(&self, which: Option<Quantifier>) -> bool {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) | Formula::Const(_) => false,
            Formula::Binary(_, l, r) => l.has_quantifier(which) || r.has_quantifier(which),
            Formula::Quant(q, _, body) => which.is_none_or(|w| w == *q) || body.has_quantifier(which),
        }
    }
}

// Binding strength, loosest first: quantifiers, (+), (*), |, &, literals.
fn op_prec(op: BinOp) -> u8 {
    match op {
        BinOp::Gullibility => 1,
        BinOp::Consensus => 2,
        BinOp::Or => 3,
        BinOp::And => 4,
    }
}

const ATOMIC: u8 = 5;

fn fmt_formula(f: &mut fmt::Formatter<'_>, phi: &Formula, ctx: u8) -> fmt::Result {
    match phi {
        Formula::Atom(a) => write!(f, "{a}"),
        Formula::NegAtom(a) => write!(f, "~{a}"),
        Formula::Const(v) => write!(f, "{v}"),
        Formula::Binary(op, l, r) => {
            let p = op_prec(*op);
            if p < ctx {
                f.write_str("(")?;
            }
            fmt_formula(f, l, p)?;
            write!(f, " {} ", op.token())?;
            fmt_formula(f, r, p + 1)?;
            if p < ctx {
                f.write_str(")")?;
            }
            Ok(())
        }
        Formula::Quant(q, v, body) => {
            if ctx > 0 {
                f.write_str("(")?;
            }
            let kw = match q {
                Quantifier::Exists => "exists",
                Quantifier::Forall => "forall",
            };
            write!(f, "{kw} {v} ")?;
            fmt_formula(f, body, 0)?;
            if ctx > 0 {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(f, self, 0)
    }
}

/// A quantifier-free, variable-free formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroundFormula {
    Atom(GroundAtom),
    NegAtom(GroundAtom),
    Const(TruthValue),
    Binary(BinOp, Box<GroundFormula>, Box<GroundFormula>),
}

impl GroundFormula {
    pub fn binary(op: BinOp, left: GroundFormula, right: GroundFormula) -> Self {
        GroundFormula::Binary(op, Box::new(left), Box::new(right))
    }

    /// Lifts back into the general formula type.
    pub fn to_formula(&self) -> Formula {
        let lift = |a: &GroundAtom| Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().cloned().map(Term::Const).collect(),
        };
        match self {
            GroundFormula::Atom(a) => Formula::Atom(lift(a)),
            GroundFormula::NegAtom(a) => Formula::NegAtom(lift(a)),
            GroundFormula::Const(v) => Formula::Const(*v),
            GroundFormula::Binary(op, l, r) => Formula::binary(*op, l.to_formula(), r.to_formula()),
        }
    }

    pub fn atoms(&self) -> Vec<&GroundAtom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a GroundAtom>) {
        match self {
            GroundFormula::Atom(a) | GroundFormula::NegAtom(a) => out.push(a),
            GroundFormula::Const(_) => {}
            GroundFormula::Binary(_, l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// True if the tree uses any of `ops`.
    pub fn uses_op(&self, ops: &[BinOp]) -> bool {
        match self {
            GroundFormula::Binary(op, l, r) => ops.contains(op) || l.uses_op(ops) || r.uses_op(ops),
            _ => false,
        }
    }

    pub fn constants(&self) -> Vec<TruthValue> {
        match self {
            GroundFormula::Const(v) => vec![*v],
            GroundFormula::Binary(_, l, r) => {
                let mut c = l.constants();
                c.extend(r.constants());
                c
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for GroundFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// `atom = value.`
#[derive(Clone, Debug)]
pub struct Fact {
    pub atom: GroundAtom,
    pub value: TruthValue,
    pub pos: Pos,
}

/// `head <- body.`
#[derive(Clone, Debug)]
pub struct Clause {
    pub head: Atom,
    pub body: Formula,
    pub pos: Pos,
}

// Positions are diagnostics only and take no part in equality.
impl PartialEq for Fact {
    fn eq(&self, other: &Self) -> bool {
        self.atom == other.atom && self.value == other.value
    }
}

impl Eq for Fact {}

impl PartialEq for Clause {
    fn eq(&self, other: &Self) -> bool {
        self.head == other.head && self.body == other.body
    }
}

impl Eq for Clause {}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}.", self.atom, self.value)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <- {}.", self.head, self.body)
    }
}

/// A Fitting program `<F, R>` over a fixed bilattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub bilattice: Bilattice,
    pub facts: Vec<Fact>,
    pub rules: Vec<Clause>,
}

impl Program {
    pub fn new(bilattice: Bilattice) -> Self {
        Program {
            bilattice,
            facts: Vec::new(),
            rules: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty() && self.rules.is_empty()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fact in &self.facts {
            writeln!(f, "{fact}")?;
        }
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}
