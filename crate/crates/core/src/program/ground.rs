//! Grounding: instantiating a program over its Herbrand universe.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{Atom, Clause, Fact, Formula, GroundAtom, GroundFormula, Pos, Program, Quantifier, Symbol, Term};
use crate::bilattice::{Bilattice, BinOp, Four, TruthValue};
use crate::interpretation::Interpretation;

/// Largest Herbrand base the grounder will build.
pub const MAX_BASE: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroundError {
    #[error("{pos}: predicate `{predicate}` used with arity {found}, earlier with {expected}")]
    Arity {
        predicate: Symbol,
        expected: usize,
        found: usize,
        pos: Pos,
    },
    #[error("the program uses variables or quantifiers but mentions no constants")]
    EmptyUniverse,
    #[error("{pos}: variable `{var}` in the body of a `{head}` rule is bound by neither the head nor a quantifier")]
    Range { var: Symbol, head: Symbol, pos: Pos },
    #[error("`{atom}` is given conflicting values {first} and {second}")]
    ConflictingFacts {
        atom: GroundAtom,
        first: TruthValue,
        second: TruthValue,
    },
    #[error("{pos}: value {value} does not belong to bilattice {bilattice}")]
    Value {
        value: TruthValue,
        bilattice: Bilattice,
        pos: Pos,
    },
    #[error("{pos}: negation is not available in bilattice {0}", pos = .1)]
    NoNegation(Bilattice, Pos),
    #[error("the Herbrand base would exceed {MAX_BASE} atoms")]
    TooLarge,
}

/// Constants, predicates and ground atoms of a program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HerbrandBase {
    universe: Vec<Symbol>,
    predicates: BTreeMap<Symbol, usize>,
    atoms: BTreeSet<GroundAtom>,
}

impl HerbrandBase {
    /// Every ground atom over `predicates` (name to arity) and `universe`.
    pub fn new(
        universe: impl IntoIterator<Item = Symbol>,
        predicates: BTreeMap<Symbol, usize>,
    ) -> Result<Self, GroundError> {
        let universe: Vec<Symbol> = universe.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut total = 0usize;
        for &arity in predicates.values() {
            let n = u32::try_from(arity)
                .ok()
                .and_then(|a| universe.len().checked_pow(a))
                .ok_or(GroundError::TooLarge)?;
            total = total.checked_add(n).ok_or(GroundError::TooLarge)?;
            if total > MAX_BASE {
                return Err(GroundError::TooLarge);
            }
        }
        let mut atoms = BTreeSet::new();
        for (pred, &arity) in &predicates {
            for args in tuples(&universe, arity) {
                atoms.insert(GroundAtom {
                    predicate: pred.clone(),
                    args,
                });
            }
        }
        Ok(HerbrandBase {
            universe,
            predicates,
            atoms,
        })
    }

    /// A base consisting of exactly `atoms`, for propositional programs and tests.
    /// The universe is the set of constants appearing in them.
    pub fn from_atoms(atoms: impl IntoIterator<Item = GroundAtom>) -> Self {
        let atoms: BTreeSet<GroundAtom> = atoms.into_iter().collect();
        let universe = atoms
            .iter()
            .flat_map(|a| a.args.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let predicates = atoms.iter().map(|a| (a.predicate.clone(), a.args.len())).collect();
        HerbrandBase {
            universe,
            predicates,
            atoms,
        }
    }

    pub fn universe(&self) -> &[Symbol] {
        &self.universe
    }

    pub fn predicates(&self) -> &BTreeMap<Symbol, usize> {
        &self.predicates
    }

    /// Atoms in canonical (sorted) order.
    pub fn atoms(&self) -> impl Iterator<Item = &GroundAtom> + '_ {
        self.atoms.iter()
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

fn tuples(universe: &[Symbol], arity: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::with_capacity(arity)];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                universe.iter().map(move |c| {
                    let mut t = prefix.clone();
                    t.push(c.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// A variable-free program with one clause per head.
#[derive(Debug, Clone)]
pub struct GroundProgram {
    pub bilattice: Bilattice,
    pub base: Arc<HerbrandBase>,
    /// Facts as written (including any `= U` facts).
    pub facts: BTreeMap<GroundAtom, TruthValue>,
    /// Rule bodies, instances with a common head merged by `|`.
    pub rules: BTreeMap<GroundAtom, GroundFormula>,
    /// The effective clause of every head: a fact `A = v` and a rule
    /// `A <- B` combine into `A <- v | B`.
    pub clauses: BTreeMap<GroundAtom, GroundFormula>,
    /// Whether the source used `forall` (lost by expansion).
    pub uses_forall: bool,
}

impl PartialEq for GroundProgram {
    fn eq(&self, other: &Self) -> bool {
        self.bilattice == other.bilattice
            && self.base == other.base
            && self.facts == other.facts
            && self.rules == other.rules
    }
}

impl GroundProgram {
    pub fn clause(&self, head: &GroundAtom) -> Option<&GroundFormula> {
        self.clauses.get(head)
    }

    /// `Head(P)`: every atom heading a rule or a fact.
    pub fn heads(&self) -> impl Iterator<Item = &GroundAtom> + '_ {
        self.clauses.keys()
    }

    /// The facts `F` as an interpretation.
    pub fn fact_interpretation(&self) -> Interpretation {
        let mut i = Interpretation::new(self.base.clone(), self.bilattice);
        for (atom, &v) in &self.facts {
            i.set(atom.clone(), v)
                .expect("fact atoms are in the base and values were checked");
        }
        i
    }

    /// True for Datalog with negation over FOUR: no `(*)`, `(+)` or
    /// `forall`, no constant other than `T` in bodies, and all facts `T`.
    pub fn is_datalog_neg(&self) -> bool {
        self.bilattice == Bilattice::Four
            && !self.uses_forall
            && self.facts.values().all(|&v| v == TruthValue::TRUE)
            && self.rules.values().all(|b| {
                !b.uses_op(&[BinOp::Consensus, BinOp::Gullibility])
                    && b.constants().iter().all(|&c| c == TruthValue::TRUE)
            })
    }

    /// Back to a (variable-free) source program.
    pub fn to_program(&self) -> Program {
        let lift = |a: &GroundAtom| Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().cloned().map(Term::Const).collect(),
        };
        Program {
            bilattice: self.bilattice,
            facts: self
                .facts
                .iter()
                .map(|(a, &value)| Fact {
                    atom: a.clone(),
                    value,
                    pos: Pos::default(),
                })
                .collect(),
            rules: self
                .rules
                .iter()
                .map(|(a, body)| Clause {
                    head: lift(a),
                    body: body.to_formula(),
                    pos: Pos::default(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_program())
    }
}

struct Signature {
    predicates: BTreeMap<Symbol, usize>,
    constants: BTreeSet<Symbol>,
}

impl Signature {
    fn note(&mut self, predicate: &Symbol, arity: usize, pos: Pos) -> Result<(), GroundError> {
        match self.predicates.get(predicate) {
            Some(&expected) if expected != arity => Err(GroundError::Arity {
                predicate: predicate.clone(),
                expected,
                found: arity,
                pos,
            }),
            Some(_) => Ok(()),
            None => {
                self.predicates.insert(predicate.clone(), arity);
                Ok(())
            }
        }
    }

    fn note_atom(&mut self, atom: &Atom, pos: Pos) -> Result<(), GroundError> {
        self.note(&atom.predicate, atom.args.len(), pos)?;
        for t in &atom.args {
            if let Term::Const(c) = t {
                self.constants.insert(c.clone());
            }
        }
        Ok(())
    }
}

fn check_body(body: &Formula, bilattice: Bilattice, pos: Pos) -> Result<(), GroundError> {
    match body {
        Formula::Atom(_) => Ok(()),
        Formula::NegAtom(_) if !bilattice.has_negation() => Err(GroundError::NoNegation(bilattice, pos)),
        Formula::NegAtom(_) => Ok(()),
        Formula::Const(v) if !bilattice.contains(*v) => Err(GroundError::Value {
            value: *v,
            bilattice,
            pos,
        }),
        Formula::Const(_) => Ok(()),
        Formula::Binary(_, l, r) => {
            check_body(l, bilattice, pos)?;
            check_body(r, bilattice, pos)
        }
        Formula::Quant(_, _, b) => check_body(b, bilattice, pos),
    }
}

/// Instantiates every rule over the Herbrand universe, expands quantifiers
/// into finite `|`/`&` folds and merges clauses sharing a head.
pub fn ground(program: &Program) -> Result<GroundProgram, GroundError> {
    let bilattice = program.bilattice;
    let mut sig = Signature {
        predicates: BTreeMap::new(),
        constants: BTreeSet::new(),
    };
    let mut facts = BTreeMap::new();
    for fact in &program.facts {
        let head = Atom {
            predicate: fact.atom.predicate.clone(),
            args: fact.atom.args.iter().cloned().map(Term::Const).collect(),
        };
        sig.note_atom(&head, fact.pos)?;
        if !bilattice.contains(fact.value) {
            return Err(GroundError::Value {
                value: fact.value,
                bilattice,
                pos: fact.pos,
            });
        }
        match facts.get(&fact.atom) {
            Some(&first) if first != fact.value => {
                return Err(GroundError::ConflictingFacts {
                    atom: fact.atom.clone(),
                    first,
                    second: fact.value,
                })
            }
            _ => {
                facts.insert(fact.atom.clone(), fact.value);
            }
        }
    }

    let mut needs_universe = false;
    let mut uses_forall = false;
    for rule in &program.rules {
        sig.note_atom(&rule.head, rule.pos)?;
        let mut result = Ok(());
        rule.body.visit_atoms(&mut |a| {
            if result.is_ok() {
                result = sig.note_atom(a, rule.pos);
            }
        });
        result?;
        check_body(&rule.body, bilattice, rule.pos)?;
        let head_vars: Vec<&Symbol> = rule.head.vars().collect();
        if let Some(var) = rule.body.free_vars().into_iter().find(|v| !head_vars.contains(&v)) {
            return Err(GroundError::Range {
                var,
                head: rule.head.predicate.clone(),
                pos: rule.pos,
            });
        }
        needs_universe |= !head_vars.is_empty() || rule.body.has_quantifier(None);
        uses_forall |= rule.body.has_quantifier(Some(Quantifier::Forall));
    }
    if needs_universe && sig.constants.is_empty() {
        return Err(GroundError::EmptyUniverse);
    }

    let base = Arc::new(HerbrandBase::new(sig.constants, sig.predicates)?);
    let universe = base.universe().to_vec();

    let mut rules: BTreeMap<GroundAtom, GroundFormula> = BTreeMap::new();
    for rule in &program.rules {
        let mut vars: Vec<Symbol> = Vec::new();
        for v in rule.head.vars() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        for values in tuples(&universe, vars.len()) {
            let mut env: Vec<(Symbol, Symbol)> = vars.iter().cloned().zip(values).collect();
            let head = rule.head.substitute(&env).expect("head variables are bound");
            let body = expand(&rule.body, &mut env, &universe);
            let merged = match rules.remove(&head) {
                Some(prev) => GroundFormula::binary(BinOp::Or, prev, body),
                None => body,
            };
            rules.insert(head, merged);
        }
    }

    let mut clauses = BTreeMap::new();
    for (atom, &v) in &facts {
        let body = match rules.get(atom) {
            Some(b) => GroundFormula::binary(BinOp::Or, GroundFormula::Const(v), b.clone()),
            None => GroundFormula::Const(v),
        };
        clauses.insert(atom.clone(), body);
    }
    for (atom, body) in &rules {
        clauses.entry(atom.clone()).or_insert_with(|| body.clone());
    }

    Ok(GroundProgram {
        bilattice,
        base,
        facts,
        rules,
        clauses,
        uses_forall,
    })
}

fn expand(f: &Formula, env: &mut Vec<(Symbol, Symbol)>, universe: &[Symbol]) -> GroundFormula {
    match f {
        Formula::Atom(a) => GroundFormula::Atom(a.substitute(env).expect("range-checked")),
        Formula::NegAtom(a) => GroundFormula::NegAtom(a.substitute(env).expect("range-checked")),
        Formula::Const(v) => GroundFormula::Const(*v),
        Formula::Binary(op, l, r) => GroundFormula::binary(*op, expand(l, env, universe), expand(r, env, universe)),
        Formula::Quant(q, var, body) => {
            let op = match q {
                Quantifier::Exists => BinOp::Or,
                Quantifier::Forall => BinOp::And,
            };
            let mut acc: Option<GroundFormula> = None;
            for c in universe {
                env.push((var.clone(), c.clone()));
                let inst = expand(body, env, universe);
                env.pop();
                acc = Some(match acc {
                    Some(prev) => GroundFormula::binary(op, prev, inst),
                    None => inst,
                });
            }
            // The universe is non-empty whenever a quantifier occurs; the
            // fallback is the unit of the fold.
            acc.unwrap_or(GroundFormula::Const(TruthValue::Four(match q {
                Quantifier::Exists => Four::False,
                Quantifier::Forall => Four::True,
            })))
        }
    }
}
