//! Classical semantics of Datalog with negation, implemented independently
//! of the bilattice engine: the well-founded semantics via unfounded sets
//! and the Kripke-Kleene semantics via three-valued iteration.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::bilattice::{Bilattice, BinOp, TruthValue};
use crate::interpretation::Interpretation;
use crate::program::{GroundAtom, GroundFormula, GroundProgram, HerbrandBase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReferenceError {
    #[error("the program is outside the Datalog-with-negation fragment")]
    NotDatalog,
    #[error("`{0}` is both true and false")]
    Inconsistent(GroundAtom),
    #[error("value {0} has no two-valued reading")]
    NotThreeValued(TruthValue),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Pos(GroundAtom),
    Neg(GroundAtom),
}

impl Literal {
    pub fn atom(&self) -> &GroundAtom {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a,
        }
    }
}

/// `head <- l1, ..., lk`; an empty body is a fact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DatalogRule {
    pub head: GroundAtom,
    pub body: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatalogProgram {
    pub base: Arc<HerbrandBase>,
    pub rules: Vec<DatalogRule>,
}

/// A consistent set of ground literals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialInterpretation {
    pub pos: BTreeSet<GroundAtom>,
    pub neg: BTreeSet<GroundAtom>,
}

impl PartialInterpretation {
    pub fn new(pos: BTreeSet<GroundAtom>, neg: BTreeSet<GroundAtom>) -> Result<Self, ReferenceError> {
        if let Some(a) = pos.intersection(&neg).next() {
            return Err(ReferenceError::Inconsistent(a.clone()));
        }
        Ok(PartialInterpretation { pos, neg })
    }

    fn holds(&self, l: &Literal) -> bool {
        match l {
            Literal::Pos(a) => self.pos.contains(a),
            Literal::Neg(a) => self.neg.contains(a),
        }
    }

    fn contradicts(&self, l: &Literal) -> bool {
        match l {
            Literal::Pos(a) => self.neg.contains(a),
            Literal::Neg(a) => self.pos.contains(a),
        }
    }
}

impl DatalogProgram {
    /// Atoms absent from the base are added to it.
    pub fn new(base: Arc<HerbrandBase>, rules: Vec<DatalogRule>) -> Self {
        let missing: Vec<GroundAtom> = rules
            .iter()
            .flat_map(|r| std::iter::once(&r.head).chain(r.body.iter().map(Literal::atom)))
            .filter(|a| !base.contains(a))
            .cloned()
            .collect();
        let base = if missing.is_empty() {
            base
        } else {
            Arc::new(HerbrandBase::from_atoms(base.atoms().cloned().chain(missing)))
        };
        DatalogProgram { base, rules }
    }

    /// Splits each merged body into its disjunctive normal form, one rule
    /// per disjunct.
    pub fn from_ground(g: &GroundProgram) -> Result<Self, ReferenceError> {
        if !g.is_datalog_neg() {
            return Err(ReferenceError::NotDatalog);
        }
        let mut rules = Vec::new();
        for head in g.facts.keys() {
            rules.push(DatalogRule {
                head: head.clone(),
                body: Vec::new(),
            });
        }
        for (head, body) in &g.rules {
            for conj in dnf(body) {
                rules.push(DatalogRule {
                    head: head.clone(),
                    body: conj,
                });
            }
        }
        Ok(DatalogProgram {
            base: g.base.clone(),
            rules,
        })
    }

    fn rules_by_head(&self) -> BTreeMap<&GroundAtom, Vec<&DatalogRule>> {
        let mut m: BTreeMap<&GroundAtom, Vec<&DatalogRule>> = BTreeMap::new();
        for r in &self.rules {
            m.entry(&r.head).or_default().push(r);
        }
        m
    }
}

// Bodies in the fragment are built from literals, T, & and |.
fn dnf(f: &GroundFormula) -> Vec<Vec<Literal>> {
    match f {
        GroundFormula::Atom(a) => vec![vec![Literal::Pos(a.clone())]],
        GroundFormula::NegAtom(a) => vec![vec![Literal::Neg(a.clone())]],
        GroundFormula::Const(_) => vec![Vec::new()],
        GroundFormula::Binary(BinOp::Or, l, r) => {
            let mut out = dnf(l);
            out.extend(dnf(r));
            out
        }
        GroundFormula::Binary(_, l, r) => {
            let rs = dnf(r);
            dnf(l)
                .into_iter()
                .flat_map(|lc| {
                    rs.iter().map(move |rc| {
                        let mut c = lc.clone();
                        c.extend(rc.iter().cloned());
                        c
                    })
                })
                .collect()
        }
    }
}

/// `T_P(I)`: heads of rules whose every body literal is in `I`.
pub fn tp(p: &DatalogProgram, i: &PartialInterpretation) -> BTreeSet<GroundAtom> {
    p.rules
        .iter()
        .filter(|r| r.body.iter().all(|l| i.holds(l)))
        .map(|r| r.head.clone())
        .collect()
}

/// Potentially founded atoms: the limit of `SPF^1 ⊆ SPF^2 ⊆ ...`, where a
/// rule contributes its head once its positive atoms are all potentially
/// founded and none of its literals is contradicted by `I`.
pub fn spf(p: &DatalogProgram, i: &PartialInterpretation) -> BTreeSet<GroundAtom> {
    let mut founded = BTreeSet::new();
    loop {
        let next: BTreeSet<GroundAtom> = p
            .rules
            .iter()
            .filter(|r| {
                r.body.iter().all(|l| {
                    !i.contradicts(l)
                        && match l {
                            Literal::Pos(a) => founded.contains(a),
                            Literal::Neg(_) => true,
                        }
                })
            })
            .map(|r| r.head.clone())
            .collect();
        if next == founded {
            return founded;
        }
        founded = next;
    }
}

/// The greatest unfounded set `U_P(I) = HB \ SPF_P(I)`.
pub fn unfounded(p: &DatalogProgram, i: &PartialInterpretation) -> BTreeSet<GroundAtom> {
    let founded = spf(p, i);
    p.base.atoms().filter(|a| !founded.contains(a)).cloned().collect()
}

/// True if every rule for a member of `u` has a literal falsified by `i` or
/// a positive body atom in `u`.
pub fn is_unfounded_set(p: &DatalogProgram, i: &PartialInterpretation, u: &BTreeSet<GroundAtom>) -> bool {
    p.rules.iter().filter(|r| u.contains(&r.head)).all(|r| {
        r.body.iter().any(|l| {
            i.contradicts(l)
                || match l {
                    Literal::Pos(a) => u.contains(a),
                    Literal::Neg(_) => false,
                }
        })
    })
}

/// A single application of `W_P(I) = T_P(I) ∪ ¬U_P(I)`.
pub fn w_step(p: &DatalogProgram, i: &PartialInterpretation) -> PartialInterpretation {
    PartialInterpretation {
        pos: tp(p, i),
        neg: unfounded(p, i),
    }
}

/// The least fixpoint of `W_P`, with the stages leading to it.
pub fn well_founded_trace(p: &DatalogProgram) -> Vec<PartialInterpretation> {
    let mut stages = vec![PartialInterpretation::default()];
    loop {
        let next = w_step(p, stages.last().expect("non-empty"));
        if &next == stages.last().expect("non-empty") {
            return stages;
        }
        stages.push(next);
    }
}

pub fn well_founded(p: &DatalogProgram) -> PartialInterpretation {
    well_founded_trace(p).pop().expect("non-empty")
}

/// Strong Kleene three-valued truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kleene {
    False,
    Unknown,
    True,
}

impl Kleene {
    fn and(self, other: Kleene) -> Kleene {
        match (self, other) {
            (Kleene::False, _) | (_, Kleene::False) => Kleene::False,
            (Kleene::True, Kleene::True) => Kleene::True,
            _ => Kleene::Unknown,
        }
    }

    fn or(self, other: Kleene) -> Kleene {
        match (self, other) {
            (Kleene::True, _) | (_, Kleene::True) => Kleene::True,
            (Kleene::False, Kleene::False) => Kleene::False,
            _ => Kleene::Unknown,
        }
    }

    fn not(self) -> Kleene {
        match self {
            Kleene::True => Kleene::False,
            Kleene::False => Kleene::True,
            Kleene::Unknown => Kleene::Unknown,
        }
    }
}

pub type Valuation = BTreeMap<GroundAtom, Kleene>;

fn read(v: &Valuation, a: &GroundAtom) -> Kleene {
    v.get(a).copied().unwrap_or(Kleene::Unknown)
}

/// One step of the Kripke-Kleene operator: true if some body is true,
/// false if the atom has rules and all of their bodies are false.
pub fn phi(p: &DatalogProgram, v: &Valuation) -> Valuation {
    let mut out = Valuation::new();
    for (head, rules) in p.rules_by_head() {
        let value = rules
            .iter()
            .map(|r| {
                r.body.iter().fold(Kleene::True, |acc, l| {
                    acc.and(match l {
                        Literal::Pos(a) => read(v, a),
                        Literal::Neg(a) => read(v, a).not(),
                    })
                })
            })
            .fold(Kleene::False, Kleene::or);
        if value != Kleene::Unknown {
            out.insert(head.clone(), value);
        }
    }
    out
}

/// Limit of `Φ_P` from the everywhere-unknown valuation.
pub fn kripke_kleene_valuation(p: &DatalogProgram) -> Valuation {
    let mut v = Valuation::new();
    loop {
        let next = phi(p, &v);
        if next == v {
            return v;
        }
        v = next;
    }
}

/// The Kripke-Kleene model as a FOUR interpretation over the program's base.
pub fn kripke_kleene(p: &DatalogProgram) -> Interpretation {
    valuation_to_interpretation(&kripke_kleene_valuation(p), &p.base)
}

pub fn valuation_to_interpretation(v: &Valuation, base: &Arc<HerbrandBase>) -> Interpretation {
    let mut i = Interpretation::new(base.clone(), Bilattice::Four);
    for (a, k) in v {
        let value = match k {
            Kleene::True => TruthValue::TRUE,
            Kleene::False => TruthValue::FALSE,
            Kleene::Unknown => continue,
        };
        i.set(a.clone(), value).expect("valuation atoms are in the base");
    }
    i
}

/// Reads a three-valued FOUR interpretation as a valuation.
pub fn interpretation_to_valuation(i: &Interpretation) -> Result<Valuation, ReferenceError> {
    i.iter()
        .map(|(a, v)| match v {
            TruthValue::TRUE => Ok((a.clone(), Kleene::True)),
            TruthValue::FALSE => Ok((a.clone(), Kleene::False)),
            other => Err(ReferenceError::NotThreeValued(other)),
        })
        .collect()
}

/// `pos ↦ T`, `neg ↦ F`, everything else `U`.
pub fn to_three_valued(pi: &PartialInterpretation, base: &Arc<HerbrandBase>) -> Result<Interpretation, ReferenceError> {
    if let Some(a) = pi.pos.intersection(&pi.neg).next() {
        return Err(ReferenceError::Inconsistent(a.clone()));
    }
    let mut i = Interpretation::new(base.clone(), Bilattice::Four);
    for (atoms, value) in [(&pi.pos, TruthValue::TRUE), (&pi.neg, TruthValue::FALSE)] {
        for a in atoms {
            i.set(a.clone(), value)
                .map_err(|_| ReferenceError::Inconsistent(a.clone()))?;
        }
    }
    Ok(i)
}

/// Inverse of [`to_three_valued`].
pub fn to_partial(i: &Interpretation) -> Result<PartialInterpretation, ReferenceError> {
    let mut pi = PartialInterpretation::default();
    for (a, v) in i.iter() {
        match v {
            TruthValue::TRUE => pi.pos.insert(a.clone()),
            TruthValue::FALSE => pi.neg.insert(a.clone()),
            other => return Err(ReferenceError::NotThreeValued(other)),
        };
    }
    Ok(pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::{ground, parse_program};

    fn atom(t: &str) -> GroundAtom {
        GroundAtom::parse(t).unwrap()
    }

    fn set(atoms: &[&str]) -> BTreeSet<GroundAtom> {
        atoms.iter().map(|a| atom(a)).collect()
    }

    fn prog(text: &str) -> DatalogProgram {
        DatalogProgram::from_ground(&ground(&parse_program(text, Bilattice::Four).unwrap()).unwrap()).unwrap()
    }

    fn pi(pos: &[&str], neg: &[&str]) -> PartialInterpretation {
        PartialInterpretation::new(set(pos), set(neg)).unwrap()
    }

    #[test]
    fn tp_examples() {
        assert_eq!(tp(&prog("a <- b."), &pi(&["b"], &[])), set(&["a"]));
        assert_eq!(tp(&prog("b = T.\na <- b."), &pi(&[], &[])), set(&["b"]));
        assert_eq!(tp(&prog("a <- ~b."), &pi(&[], &["b"])), set(&["a"]));
    }

    #[test]
    fn spf_examples() {
        assert_eq!(spf(&prog("a <- ~b."), &pi(&[], &[])), set(&["a"]));
        assert_eq!(spf(&prog("r <- r."), &pi(&[], &[])), set(&[]));
        assert_eq!(spf(&prog("a <- b.\nb = T."), &pi(&[], &[])), set(&["a", "b"]));
    }

    #[test]
    fn unfounded_examples() {
        let r = prog("r <- r.");
        let e = pi(&[], &[]);
        assert_eq!(unfounded(&r, &e), set(&["r"]));
        assert_eq!(unfounded(&prog("a = T.\nb = T."), &e), set(&[]));
        let pq = prog("p <- ~q.\nq <- ~p.");
        assert_eq!(unfounded(&pq, &e), set(&[]));
        assert!(is_unfounded_set(&r, &e, &unfounded(&r, &e)));
    }

    #[test]
    fn well_founded_examples() {
        assert_eq!(well_founded(&prog("p <- ~q.\nq <- ~p.\nr <- r.")), pi(&[], &["r"]));
        assert_eq!(
            well_founded(&prog("c = T.\nb <- ~c.\na <- ~b.")),
            pi(&["a", "c"], &["b"])
        );
        let empty = DatalogProgram::new(Arc::new(HerbrandBase::from_atoms([atom("x")])), Vec::new());
        assert_eq!(well_founded(&empty), pi(&[], &["x"]));
    }

    #[test]
    fn kripke_kleene_examples() {
        let r = prog("r <- r.");
        assert!(kripke_kleene(&r).def().is_empty());
        let kk = kripke_kleene(&prog("c = T.\nb <- ~c."));
        assert_eq!(kk.get(&atom("c")), TruthValue::TRUE);
        assert_eq!(kk.get(&atom("b")), TruthValue::FALSE);
        let empty = DatalogProgram::new(Arc::new(HerbrandBase::from_atoms([atom("x")])), Vec::new());
        assert!(kripke_kleene(&empty).def().is_empty());
    }

    #[test]
    fn three_valued_round_trip() {
        let base = Arc::new(HerbrandBase::from_atoms([atom("a"), atom("b"), atom("c")]));
        let p = pi(&["a"], &["b"]);
        let i = to_three_valued(&p, &base).unwrap();
        assert_eq!(i.get(&atom("a")), TruthValue::TRUE);
        assert_eq!(i.get(&atom("b")), TruthValue::FALSE);
        assert_eq!(i.get(&atom("c")), TruthValue::UNDER);
        assert_eq!(to_partial(&i).unwrap(), p);
        assert!(to_three_valued(&PartialInterpretation::default(), &base)
            .unwrap()
            .def()
            .is_empty());
        let bad = PartialInterpretation {
            pos: set(&["a"]),
            neg: set(&["a"]),
        };
        assert_eq!(
            to_three_valued(&bad, &base),
            Err(ReferenceError::Inconsistent(atom("a")))
        );
        assert!(PartialInterpretation::new(set(&["a"]), set(&["a"])).is_err());
    }

    #[test]
    fn dnf_splits_merged_bodies() {
        let p = prog("a <- (b | c) & ~d.");
        assert_eq!(p.rules.len(), 2);
        assert_eq!(p.rules[0].body, vec![Literal::Pos(atom("b")), Literal::Neg(atom("d"))]);
    }

    #[test]
    fn non_datalog_rejected() {
        let g = ground(&parse_program("p <- q (+) r.", Bilattice::Four).unwrap()).unwrap();
        assert_eq!(DatalogProgram::from_ground(&g), Err(ReferenceError::NotDatalog));
    }
}
