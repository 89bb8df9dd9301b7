//! Interpretations: valuations of the Herbrand base.
//!
//! An [`Interpretation`] is total on the Herbrand base but stored sparsely:
//! atoms that map to the knowledge bottom `U` are simply absent, so the
//! stored key set is exactly `def(I)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bilattice::{Bilattice, BilatticeError, BinOp, TruthValue};
use crate::program::{Assignment, Formula, GroundAtom, GroundFormula, HerbrandBase, Quantifier, Symbol};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InterpretationError {
    #[error("interpretations range over different Herbrand bases or bilattices")]
    Mismatch,
    #[error("`{0}` is not in the Herbrand base")]
    OutsideBase(GroundAtom),
    #[error("free variable `{0}` in a formula being evaluated")]
    FreeVariable(Symbol),
    #[error(transparent)]
    Bilattice(#[from] BilatticeError),
}

#[derive(Debug, Clone)]
pub struct Interpretation {
    base: Arc<HerbrandBase>,
    bilattice: Bilattice,
    values: BTreeMap<GroundAtom, TruthValue>,
}

impl PartialEq for Interpretation {
    fn eq(&self, other: &Self) -> bool {
        self.bilattice == other.bilattice && self.values == other.values && self.same_base(other)
    }
}

impl Eq for Interpretation {}

impl Interpretation {
    /// The everywhere-`U` interpretation.
    pub fn new(base: Arc<HerbrandBase>, bilattice: Bilattice) -> Self {
        Interpretation {
            base,
            bilattice,
            values: BTreeMap::new(),
        }
    }

    /// Gives every atom of the base the same value.
    pub fn constant(
        base: Arc<HerbrandBase>,
        bilattice: Bilattice,
        value: TruthValue,
    ) -> Result<Self, InterpretationError> {
        let mut i = Interpretation::new(base.clone(), bilattice);
        for a in base.atoms() {
            i.set(a.clone(), value)?;
        }
        Ok(i)
    }

    /// Builds an interpretation from a parsed hypothesis, rejecting atoms
    /// outside the base.
    pub fn from_assignment(
        base: Arc<HerbrandBase>,
        bilattice: Bilattice,
        assignment: &Assignment,
    ) -> Result<Self, InterpretationError> {
        let mut i = Interpretation::new(base, bilattice);
        for (a, &v) in assignment {
            i.set(a.clone(), v)?;
        }
        Ok(i)
    }

    pub fn base(&self) -> &Arc<HerbrandBase> {
        &self.base
    }

    pub fn bilattice(&self) -> Bilattice {
        self.bilattice
    }

    /// `I(A)`. Atoms outside the base read as `U`.
    pub fn get(&self, atom: &GroundAtom) -> TruthValue {
        self.values
            .get(atom)
            .copied()
            .unwrap_or_else(|| self.bilattice.bottom_k())
    }

    pub fn set(&mut self, atom: GroundAtom, value: TruthValue) -> Result<(), InterpretationError> {
        if !self.base.contains(&atom) {
            return Err(InterpretationError::OutsideBase(atom));
        }
        self.bilattice.check(value)?;
        if value == self.bilattice.bottom_k() {
            self.values.remove(&atom);
        } else {
            self.values.insert(atom, value);
        }
        Ok(())
    }

    /// `def(I)`, the atoms not mapped to `U`.
    pub fn def(&self) -> BTreeSet<GroundAtom> {
        self.values.keys().cloned().collect()
    }

    pub fn is_defined(&self, atom: &GroundAtom) -> bool {
        self.values.contains_key(atom)
    }

    /// Defined atoms with their values, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&GroundAtom, TruthValue)> + '_ {
        self.values.iter().map(|(a, &v)| (a, v))
    }

    /// `(atom, value)` pairs of the defined atoms, for machine diffing.
    pub fn pairs(&self) -> Vec<(String, String)> {
        self.iter().map(|(a, v)| (a.to_string(), v.to_string())).collect()
    }

    fn same_base(&self, other: &Interpretation) -> bool {
        Arc::ptr_eq(&self.base, &other.base) || self.base == other.base
    }

    fn check_same(&self, other: &Interpretation) -> Result<(), InterpretationError> {
        if self.bilattice == other.bilattice && self.same_base(other) {
            Ok(())
        } else {
            Err(InterpretationError::Mismatch)
        }
    }

    /// `I <= J`: every atom defined in `I` keeps its value in `J`.
    pub fn part_of(&self, other: &Interpretation) -> Result<bool, InterpretationError> {
        self.check_same(other)?;
        Ok(self.values.iter().all(|(a, v)| other.values.get(a) == Some(v)))
    }

    /// Defined atoms agree wherever both are defined.
    pub fn compatible(&self, other: &Interpretation) -> Result<bool, InterpretationError> {
        self.check_same(other)?;
        Ok(self
            .values
            .iter()
            .all(|(a, v)| other.values.get(a).is_none_or(|w| w == v)))
    }

    /// Equal to `I` on `atoms`, `U` elsewhere.
    pub fn restrict<'a>(&self, atoms: impl IntoIterator<Item = &'a GroundAtom>) -> Interpretation {
        let keep: BTreeSet<&GroundAtom> = atoms.into_iter().collect();
        Interpretation {
            base: self.base.clone(),
            bilattice: self.bilattice,
            values: self
                .values
                .iter()
                .filter(|(a, _)| keep.contains(a))
                .map(|(a, v)| (a.clone(), *v))
                .collect(),
        }
    }

    /// `I` with `atoms` reset to `U`.
    pub fn without<'a>(&self, atoms: impl IntoIterator<Item = &'a GroundAtom>) -> Interpretation {
        let mut out = self.clone();
        for a in atoms {
            out.values.remove(a);
        }
        out
    }

    fn normalise(mut self) -> Self {
        let u = self.bilattice.bottom_k();
        self.values.retain(|_, v| *v != u);
        self
    }

    /// Pointwise binary operation.
    pub fn combine(&self, op: BinOp, other: &Interpretation) -> Result<Interpretation, InterpretationError> {
        self.check_same(other)?;
        let u = self.bilattice.bottom_k();
        let mut values = BTreeMap::new();
        let keys: BTreeSet<&GroundAtom> = self.values.keys().chain(other.values.keys()).collect();
        // Atoms undefined in both map to U op U, which need not be U for
        // the truth operations, so those are handled over the whole base.
        let uu = u.apply(op, u)?;
        if uu != u {
            for a in self.base.atoms() {
                let v = self.get(a).apply(op, other.get(a))?;
                values.insert(a.clone(), v);
            }
        } else {
            for a in keys {
                let v = self.get(a).apply(op, other.get(a))?;
                values.insert(a.clone(), v);
            }
        }
        Ok(Interpretation {
            base: self.base.clone(),
            bilattice: self.bilattice,
            values,
        }
        .normalise())
    }

    /// Pointwise `⊕`.
    pub fn knowledge_join(&self, other: &Interpretation) -> Result<Interpretation, InterpretationError> {
        self.combine(BinOp::Gullibility, other)
    }

    /// Pointwise `⊗`.
    pub fn knowledge_meet(&self, other: &Interpretation) -> Result<Interpretation, InterpretationError> {
        self.combine(BinOp::Consensus, other)
    }

    /// Pointwise `∧`.
    pub fn truth_meet(&self, other: &Interpretation) -> Result<Interpretation, InterpretationError> {
        self.combine(BinOp::And, other)
    }

    /// Pointwise `∨`.
    pub fn truth_join(&self, other: &Interpretation) -> Result<Interpretation, InterpretationError> {
        self.combine(BinOp::Or, other)
    }

    fn map(
        &self,
        f: impl Fn(TruthValue) -> Result<TruthValue, BilatticeError>,
    ) -> Result<Interpretation, InterpretationError> {
        let u = self.bilattice.bottom_k();
        let fu = f(u)?;
        let mut values = BTreeMap::new();
        if fu != u {
            for a in self.base.atoms() {
                values.insert(a.clone(), f(self.get(a))?);
            }
        } else {
            for (a, &v) in &self.values {
                values.insert(a.clone(), f(v)?);
            }
        }
        Ok(Interpretation {
            base: self.base.clone(),
            bilattice: self.bilattice,
            values,
        }
        .normalise())
    }

    /// Pointwise negation.
    pub fn negate(&self) -> Result<Interpretation, InterpretationError> {
        self.map(TruthValue::negate)
    }

    /// Pointwise conflation.
    pub fn conflate(&self) -> Result<Interpretation, InterpretationError> {
        self.map(TruthValue::conflate)
    }

    /// Pointwise `<=k`.
    pub fn leq_k(&self, other: &Interpretation) -> Result<bool, InterpretationError> {
        self.check_same(other)?;
        for a in self.values.keys().chain(other.values.keys()) {
            if !self.get(a).leq_k(other.get(a))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `I_O`: `I` on `def(I)`, the knowledge top `O` everywhere else.
    pub fn saturate(&self) -> Interpretation {
        let top = self.bilattice.top_k();
        let mut values = self.values.clone();
        for a in self.base.atoms() {
            values.entry(a.clone()).or_insert(top);
        }
        Interpretation {
            base: self.base.clone(),
            bilattice: self.bilattice,
            values,
        }
    }

    fn eval_with(&self, phi: &GroundFormula, fallback: TruthValue) -> Result<TruthValue, InterpretationError> {
        let read = |a: &GroundAtom| match self.values.get(a) {
            Some(&v) => v,
            None if self.base.contains(a) => fallback,
            None => self.bilattice.bottom_k(),
        };
        self.eval_by(phi, &read)
    }

    fn eval_by(
        &self,
        phi: &GroundFormula,
        read: &impl Fn(&GroundAtom) -> TruthValue,
    ) -> Result<TruthValue, InterpretationError> {
        Ok(match phi {
            GroundFormula::Atom(a) => read(a),
            GroundFormula::NegAtom(a) => read(a).negate()?,
            GroundFormula::Const(v) => *v,
            GroundFormula::Binary(op, l, r) => self.eval_by(l, read)?.apply(*op, self.eval_by(r, read)?)?,
        })
    }

    /// `I(φ)` for a ground formula.
    pub fn eval(&self, phi: &GroundFormula) -> Result<TruthValue, InterpretationError> {
        self.eval_with(phi, self.bilattice.bottom_k())
    }

    /// `I(φ)` for a closed formula, evaluating quantifiers directly as
    /// finite joins and meets over the Herbrand universe.
    pub fn eval_formula(&self, phi: &Formula) -> Result<TruthValue, InterpretationError> {
        self.eval_open(phi, &mut Vec::new())
    }

    fn eval_open(&self, phi: &Formula, env: &mut Vec<(Symbol, Symbol)>) -> Result<TruthValue, InterpretationError> {
        Ok(match phi {
            Formula::Atom(a) => self.get(&a.substitute(env).map_err(InterpretationError::FreeVariable)?),
            Formula::NegAtom(a) => self
                .get(&a.substitute(env).map_err(InterpretationError::FreeVariable)?)
                .negate()?,
            Formula::Const(v) => *v,
            Formula::Binary(op, l, r) => self.eval_open(l, env)?.apply(*op, self.eval_open(r, env)?)?,
            Formula::Quant(q, var, body) => {
                let (op, mut acc) = match q {
                    Quantifier::Exists => (BinOp::Or, self.bilattice.bottom_t()),
                    Quantifier::Forall => (BinOp::And, self.bilattice.top_t()),
                };
                for c in self.base.universe() {
                    env.push((var.clone(), c.clone()));
                    let v = self.eval_open(body, env);
                    env.pop();
                    acc = acc.apply(op, v?)?;
                }
                acc
            }
        })
    }

    /// The value `α` with `φ ≡_I α`, i.e. the value `φ` takes under every
    /// interpretation `J >= I`, if there is one.
    ///
    /// Every operation is monotone in the knowledge order and any such `J`
    /// lies between `I` and `I_O`, so it suffices to evaluate at both ends.
    pub fn robust_value(&self, phi: &GroundFormula) -> Result<Option<TruthValue>, InterpretationError> {
        let low = self.eval_with(phi, self.bilattice.bottom_k())?;
        let high = self.eval_with(phi, self.bilattice.top_k())?;
        Ok((low == high).then_some(low))
    }
}

impl fmt::Display for Interpretation {
    /// One `atom = value` line per defined atom, sorted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, v) in self.iter() {
            writeln!(f, "{a} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::{ground, parse_hypothesis, parse_program};

    fn atom(t: &str) -> GroundAtom {
        GroundAtom::parse(t).unwrap()
    }

    fn base(names: &[&str]) -> Arc<HerbrandBase> {
        Arc::new(HerbrandBase::from_atoms(names.iter().map(|n| atom(n))))
    }

    fn interp(hb: &Arc<HerbrandBase>, text: &str) -> Interpretation {
        let a = parse_hypothesis(text, Bilattice::Four).unwrap();
        Interpretation::from_assignment(hb.clone(), Bilattice::Four, &a).unwrap()
    }

    fn formula(text: &str) -> GroundFormula {
        let p = parse_program(&format!("goal <- {text}."), Bilattice::Four).unwrap();
        let g = ground(&p).unwrap();
        g.rules[&atom("goal")].clone()
    }

    #[test]
    fn part_of() {
        let hb = base(&["a", "b", "c"]);
        let u = Interpretation::new(hb.clone(), Bilattice::Four);
        let i = interp(&hb, "a = T.");
        assert!(u.part_of(&i).unwrap());
        assert!(i.part_of(&interp(&hb, "a = T. b = F.")).unwrap());
        assert!(!i.part_of(&interp(&hb, "a = F.")).unwrap());
        let other = Interpretation::new(base(&["z"]), Bilattice::Four);
        assert_eq!(u.part_of(&other), Err(InterpretationError::Mismatch));
    }

    #[test]
    fn compatible() {
        let hb = base(&["a", "b", "c"]);
        let x = interp(&hb, "a = T. b = F.");
        let y = interp(&hb, "b = F. c = O.");
        assert!(x.compatible(&y).unwrap() && y.compatible(&x).unwrap());
        assert!(!x.compatible(&interp(&hb, "a = F.")).unwrap());
        assert!(x.compatible(&Interpretation::new(hb, Bilattice::Four)).unwrap());
    }

    #[test]
    fn restrict() {
        let hb = base(&["a", "b"]);
        let i = interp(&hb, "a = T. b = F.");
        assert_eq!(i.restrict([&atom("a")]), interp(&hb, "a = T."));
        assert_eq!(i.restrict(hb.atoms()), i);
        assert!(i.restrict([]).part_of(&i).unwrap());
    }

    #[test]
    fn knowledge_join() {
        let hb = base(&["a", "b"]);
        let i = interp(&hb, "a = T.");
        assert_eq!(i.knowledge_join(&interp(&hb, "a = F.")).unwrap(), interp(&hb, "a = O."));
        assert_eq!(
            i.knowledge_join(&Interpretation::new(hb.clone(), Bilattice::Four))
                .unwrap(),
            i
        );
        // U & U = U but U | O = T, so the truth operations look at every atom.
        let o = interp(&hb, "a = O.");
        assert_eq!(i.truth_meet(&o).unwrap(), interp(&hb, "a = O."));
        assert_eq!(
            o.truth_join(&Interpretation::new(hb.clone(), Bilattice::Four)).unwrap(),
            interp(&hb, "a = T.")
        );
        assert_eq!(i.negate().unwrap(), interp(&hb, "a = F."));
        assert_eq!(i.conflate().unwrap(), interp(&hb, "a = T. b = O."));
    }

    #[test]
    fn eval_examples() {
        let hb = base(&["a", "c", "suspect", "innocent"]);
        let i = interp(&hb, "c = T.");
        assert_eq!(i.eval(&formula("a | c")).unwrap(), TruthValue::TRUE);
        assert_eq!(i.eval(&formula("O")).unwrap(), TruthValue::OVER);
        let j = interp(&hb, "suspect = F. innocent = T.");
        assert_eq!(j.eval(&formula("suspect (+) ~innocent")).unwrap(), TruthValue::FALSE);
    }

    #[test]
    fn saturate() {
        let hb = base(&["a", "b"]);
        assert_eq!(interp(&hb, "a = T.").saturate(), interp(&hb, "a = T. b = O."));
        let u = Interpretation::new(hb.clone(), Bilattice::Four);
        assert_eq!(u.saturate(), interp(&hb, "a = O. b = O."));
        let full = interp(&hb, "a = T. b = F.");
        assert_eq!(full.saturate(), full);
    }

    #[test]
    fn robust_value() {
        let hb = base(&["a", "c"]);
        assert_eq!(
            interp(&hb, "c = T.").robust_value(&formula("a | c")).unwrap(),
            Some(TruthValue::TRUE)
        );
        assert_eq!(
            Interpretation::new(hb.clone(), Bilattice::Four)
                .robust_value(&formula("a"))
                .unwrap(),
            None
        );
        assert_eq!(interp(&hb, "a = T.").robust_value(&formula("a & c")).unwrap(), None);
        // Atoms outside the base are always U.
        assert_eq!(
            interp(&hb, "a = T.").robust_value(&formula("zz")).unwrap(),
            Some(TruthValue::UNDER)
        );
    }

    #[test]
    fn quantified_evaluation() {
        let p = parse_program("e(a,b) = T.\nr(X) <- exists Y e(X,Y).", Bilattice::Four).unwrap();
        let g = ground(&p).unwrap();
        let f = g.fact_interpretation();
        let phi = Formula::Quant(
            Quantifier::Exists,
            Symbol::new("Y"),
            Box::new(Formula::Atom(crate::program::Atom::new(
                "e",
                vec![
                    crate::program::Term::Const("a".into()),
                    crate::program::Term::Var("Y".into()),
                ],
            ))),
        );
        assert_eq!(f.eval_formula(&phi).unwrap(), TruthValue::TRUE);
        assert_eq!(f.eval(&g.rules[&atom("r(a)")]).unwrap(), TruthValue::TRUE);
        let open = Formula::Atom(crate::program::Atom::new(
            "e",
            vec![crate::program::Term::Var("Z".into())],
        ));
        assert!(matches!(
            f.eval_formula(&open),
            Err(InterpretationError::FreeVariable(_))
        ));
    }

    #[test]
    fn outside_base_rejected() {
        let hb = base(&["a"]);
        let a = parse_hypothesis("b = T.", Bilattice::Four).unwrap();
        assert_eq!(
            Interpretation::from_assignment(hb, Bilattice::Four, &a),
            Err(InterpretationError::OutsideBase(atom("b")))
        );
    }

    #[test]
    fn display_is_sorted() {
        let hb = base(&["b", "a", "c"]);
        assert_eq!(interp(&hb, "c = O. a = T.").to_string(), "a = T\nc = O\n");
    }
}
