//! Bilattice values and operations.
//!
//! Three carriers are supported: Belnap's [`Four`], the product `L1 ⊙ L2` of
//! two base lattices (belief/doubt pairs) and the interval bilattice over a
//! base lattice. A [`TruthValue`] records which carrier it belongs to, so any
//! binary operation on values from different bilattices is rejected with
//! [`BilatticeError::Mixed`].
//!
//! Intervals `[lo, hi]` are allowed to be "inverted" (`lo > hi`). Those are the
//! overdetermined values; without them the knowledge order has no top and
//! `⊕` is not total.

mod base;
mod four;

use std::fmt;

use thiserror::Error;

pub use base::{BaseLattice, Level, UNIT_SCALE};
pub use four::Four;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BilatticeError {
    #[error("operands belong to different bilattices ({left} and {right})")]
    Mixed { left: Bilattice, right: Bilattice },
    #[error("value {value} does not belong to bilattice {bilattice}")]
    NotAMember { value: TruthValue, bilattice: Bilattice },
    #[error("bilattice {0} has no negation (the product needs identical base lattices)")]
    NoNegation(Bilattice),
    #[error("bilattice {0} has no conflation")]
    NoConflation(Bilattice),
    #[error("unknown base lattice `{0}` (expected bool, unit or chainN)")]
    UnknownBase(String),
    #[error("unknown bilattice `{0}` (expected four, product:L[,L] or interval:L)")]
    UnknownBilattice(String),
    #[error("`{literal}` is not a value of {expected}")]
    BadLiteral { literal: String, expected: String },
    #[error("interval endpoints come from different base lattices")]
    MixedEndpoints,
}

/// The four binary bilattice operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    /// `∧`, meet in the truth order.
    And,
    /// `∨`, join in the truth order.
    Or,
    /// `⊗`, meet in the knowledge order.
    Consensus,
    /// `⊕`, join in the knowledge order.
    Gullibility,
}

impl BinOp {
    pub const ALL: [BinOp; 4] = [BinOp::And, BinOp::Or, BinOp::Consensus, BinOp::Gullibility];

    /// Surface syntax of the operator in program files.
    pub fn token(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Consensus => "(*)",
            BinOp::Gullibility => "(+)",
        }
    }
}

/// A belief/doubt pair of the product bilattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pair {
    belief: Level,
    doubt: Level,
}

impl Pair {
    pub fn new(belief: Level, doubt: Level) -> Self {
        Pair { belief, doubt }
    }

    pub fn belief(self) -> Level {
        self.belief
    }

    pub fn doubt(self) -> Level {
        self.doubt
    }
}

/// An interval `[lo, hi]` of the interval bilattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Level,
    hi: Level,
}

impl Interval {
    pub fn new(lo: Level, hi: Level) -> Result<Self, BilatticeError> {
        if lo.base() != hi.base() {
            return Err(BilatticeError::MixedEndpoints);
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(self) -> Level {
        self.lo
    }

    pub fn hi(self) -> Level {
        self.hi
    }

    /// An interval is exact when `lo <= hi`; otherwise it is overdetermined.
    pub fn is_exact(self) -> bool {
        self.lo.le(self.hi)
    }
}

/// An element of some bilattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruthValue {
    Four(Four),
    Pair(Pair),
    Interval(Interval),
}

impl From<Four> for TruthValue {
    fn from(v: Four) -> Self {
        TruthValue::Four(v)
    }
}

impl TruthValue {
    pub const FALSE: TruthValue = TruthValue::Four(Four::False);
    pub const TRUE: TruthValue = TruthValue::Four(Four::True);
    pub const UNDER: TruthValue = TruthValue::Four(Four::Under);
    pub const OVER: TruthValue = TruthValue::Four(Four::Over);

    /// The bilattice this value belongs to.
    pub fn bilattice(self) -> Bilattice {
        match self {
            TruthValue::Four(_) => Bilattice::Four,
            TruthValue::Pair(p) => Bilattice::Product(p.belief.base(), p.doubt.base()),
            TruthValue::Interval(i) => Bilattice::Interval(i.lo.base()),
        }
    }

    pub fn as_four(self) -> Option<Four> {
        match self {
            TruthValue::Four(v) => Some(v),
            _ => None,
        }
    }

    fn same_carrier(self, other: TruthValue) -> Result<(), BilatticeError> {
        let (left, right) = (self.bilattice(), other.bilattice());
        if left == right {
            Ok(())
        } else {
            Err(BilatticeError::Mixed { left, right })
        }
    }

    pub fn apply(self, op: BinOp, other: TruthValue) -> Result<TruthValue, BilatticeError> {
        self.same_carrier(other)?;
        Ok(match (self, other) {
            (TruthValue::Four(a), TruthValue::Four(b)) => TruthValue::Four(match op {
                BinOp::And => a.and(b),
                BinOp::Or => a.or(b),
                BinOp::Consensus => a.consensus(b),
                BinOp::Gullibility => a.gullibility(b),
            }),
            (TruthValue::Pair(a), TruthValue::Pair(b)) => {
                let (x, y, z, w) = (a.belief, a.doubt, b.belief, b.doubt);
                TruthValue::Pair(match op {
                    BinOp::And => Pair::new(x.min(z), y.max(w)),
                    BinOp::Or => Pair::new(x.max(z), y.min(w)),
                    BinOp::Consensus => Pair::new(x.min(z), y.min(w)),
                    BinOp::Gullibility => Pair::new(x.max(z), y.max(w)),
                })
            }
            (TruthValue::Interval(a), TruthValue::Interval(b)) => {
                let (lo, hi) = match op {
                    BinOp::And => (a.lo.min(b.lo), a.hi.min(b.hi)),
                    BinOp::Or => (a.lo.max(b.lo), a.hi.max(b.hi)),
                    BinOp::Consensus => (a.lo.min(b.lo), a.hi.max(b.hi)),
                    BinOp::Gullibility => (a.lo.max(b.lo), a.hi.min(b.hi)),
                };
                TruthValue::Interval(Interval { lo, hi })
            }
            _ => unreachable!("carriers checked above"),
        })
    }

    pub fn meet_t(self, other: TruthValue) -> Result<TruthValue, BilatticeError> {
        self.apply(BinOp::And, other)
    }

    pub fn join_t(self, other: TruthValue) -> Result<TruthValue, BilatticeError> {
        self.apply(BinOp::Or, other)
    }

    pub fn consensus(self, other: TruthValue) -> Result<TruthValue, BilatticeError> {
        self.apply(BinOp::Consensus, other)
    }

    pub fn gullibility(self, other: TruthValue) -> Result<TruthValue, BilatticeError> {
        self.apply(BinOp::Gullibility, other)
    }

    pub fn leq_t(self, other: TruthValue) -> Result<bool, BilatticeError> {
        self.same_carrier(other)?;
        Ok(match (self, other) {
            (TruthValue::Four(a), TruthValue::Four(b)) => a.leq_t(b),
            (TruthValue::Pair(a), TruthValue::Pair(b)) => a.belief.le(b.belief) && b.doubt.le(a.doubt),
            (TruthValue::Interval(a), TruthValue::Interval(b)) => a.lo.le(b.lo) && a.hi.le(b.hi),
            _ => unreachable!("carriers checked above"),
        })
    }

    pub fn leq_k(self, other: TruthValue) -> Result<bool, BilatticeError> {
        self.same_carrier(other)?;
        Ok(match (self, other) {
            (TruthValue::Four(a), TruthValue::Four(b)) => a.leq_k(b),
            (TruthValue::Pair(a), TruthValue::Pair(b)) => a.belief.le(b.belief) && a.doubt.le(b.doubt),
            (TruthValue::Interval(a), TruthValue::Interval(b)) => a.lo.le(b.lo) && b.hi.le(a.hi),
            _ => unreachable!("carriers checked above"),
        })
    }

    /// Truth negation: reverses `<=t`, preserves `<=k`.
    pub fn negate(self) -> Result<TruthValue, BilatticeError> {
        match self {
            TruthValue::Four(v) => Ok(TruthValue::Four(v.negate())),
            TruthValue::Pair(p) => {
                if p.belief.base() != p.doubt.base() {
                    return Err(BilatticeError::NoNegation(self.bilattice()));
                }
                Ok(TruthValue::Pair(Pair::new(p.doubt, p.belief)))
            }
            TruthValue::Interval(i) => Ok(TruthValue::Interval(Interval {
                lo: i.hi.complement(),
                hi: i.lo.complement(),
            })),
        }
    }

    /// Conflation: reverses `<=k`, preserves `<=t`.
    pub fn conflate(self) -> Result<TruthValue, BilatticeError> {
        match self {
            TruthValue::Four(v) => Ok(TruthValue::Four(v.conflate())),
            TruthValue::Pair(p) => {
                if p.belief.base() != p.doubt.base() {
                    return Err(BilatticeError::NoConflation(self.bilattice()));
                }
                Ok(TruthValue::Pair(Pair::new(p.doubt.complement(), p.belief.complement())))
            }
            TruthValue::Interval(i) => Ok(TruthValue::Interval(Interval { lo: i.hi, hi: i.lo })),
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruthValue::Four(v) => write!(f, "{v}"),
            TruthValue::Pair(p) => write!(f, "<{},{}>", p.belief, p.doubt),
            TruthValue::Interval(i) => write!(f, "[{},{}]", i.lo, i.hi),
        }
    }
}

/// The algebra in force: which carrier, and therefore which orders and
/// operations, a program is evaluated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bilattice {
    Four,
    Product(BaseLattice, BaseLattice),
    Interval(BaseLattice),
}

impl Bilattice {
    /// Parses `four`, `product:L`, `product:L1,L2` or `interval:L`.
    pub fn from_selector(selector: &str) -> Result<Self, BilatticeError> {
        let unknown = || BilatticeError::UnknownBilattice(selector.to_string());
        if selector == "four" {
            return Ok(Bilattice::Four);
        }
        let (kind, bases) = selector.split_once(':').ok_or_else(unknown)?;
        match kind {
            "product" => match bases.split_once(',') {
                Some((l1, l2)) => Ok(Bilattice::Product(
                    BaseLattice::from_name(l1)?,
                    BaseLattice::from_name(l2)?,
                )),
                None => {
                    let l = BaseLattice::from_name(bases)?;
                    Ok(Bilattice::Product(l, l))
                }
            },
            "interval" => Ok(Bilattice::Interval(BaseLattice::from_name(bases)?)),
            _ => Err(unknown()),
        }
    }

    pub fn selector(self) -> String {
        match self {
            Bilattice::Four => "four".to_string(),
            Bilattice::Product(a, b) if a == b => format!("product:{a}"),
            Bilattice::Product(a, b) => format!("product:{a},{b}"),
            Bilattice::Interval(l) => format!("interval:{l}"),
        }
    }

    /// `<=t`-top.
    pub fn top_t(self) -> TruthValue {
        self.named(Four::True)
    }

    /// `<=t`-bottom.
    pub fn bottom_t(self) -> TruthValue {
        self.named(Four::False)
    }

    /// `<=k`-top.
    pub fn top_k(self) -> TruthValue {
        self.named(Four::Over)
    }

    /// `<=k`-bottom, the value of every atom nothing is known about.
    pub fn bottom_k(self) -> TruthValue {
        self.named(Four::Under)
    }

    /// The four extrema of any bilattice, named after the FOUR values they
    /// generalise.
    pub fn named(self, which: Four) -> TruthValue {
        match self {
            Bilattice::Four => TruthValue::Four(which),
            Bilattice::Product(l1, l2) => {
                let (b, d) = match which {
                    Four::True => (l1.top(), l2.bottom()),
                    Four::False => (l1.bottom(), l2.top()),
                    Four::Under => (l1.bottom(), l2.bottom()),
                    Four::Over => (l1.top(), l2.top()),
                };
                TruthValue::Pair(Pair::new(b, d))
            }
            Bilattice::Interval(l) => {
                let (lo, hi) = match which {
                    Four::True => (l.top(), l.top()),
                    Four::False => (l.bottom(), l.bottom()),
                    Four::Under => (l.bottom(), l.top()),
                    Four::Over => (l.top(), l.bottom()),
                };
                TruthValue::Interval(Interval { lo, hi })
            }
        }
    }

    pub fn has_negation(self) -> bool {
        match self {
            Bilattice::Four | Bilattice::Interval(_) => true,
            Bilattice::Product(a, b) => a == b,
        }
    }

    pub fn has_conflation(self) -> bool {
        self.has_negation()
    }

    pub fn is_finite(self) -> bool {
        match self {
            Bilattice::Four => true,
            Bilattice::Product(a, b) => a.is_finite() && b.is_finite(),
            Bilattice::Interval(l) => l.is_finite(),
        }
    }

    pub fn contains(self, value: TruthValue) -> bool {
        value.bilattice() == self
    }

    pub fn check(self, value: TruthValue) -> Result<TruthValue, BilatticeError> {
        if self.contains(value) {
            Ok(value)
        } else {
            Err(BilatticeError::NotAMember { value, bilattice: self })
        }
    }

    /// Builds a product value from two level literals.
    pub fn pair(self, belief: &str, doubt: &str) -> Result<TruthValue, BilatticeError> {
        match self {
            Bilattice::Product(l1, l2) => Ok(TruthValue::Pair(Pair::new(
                l1.parse_level(belief.trim())?,
                l2.parse_level(doubt.trim())?,
            ))),
            _ => Err(BilatticeError::BadLiteral {
                literal: format!("<{belief},{doubt}>"),
                expected: self.selector(),
            }),
        }
    }

    /// Builds an interval value from two level literals.
    pub fn interval(self, lo: &str, hi: &str) -> Result<TruthValue, BilatticeError> {
        match self {
            Bilattice::Interval(l) => Ok(TruthValue::Interval(Interval::new(
                l.parse_level(lo.trim())?,
                l.parse_level(hi.trim())?,
            )?)),
            _ => Err(BilatticeError::BadLiteral {
                literal: format!("[{lo},{hi}]"),
                expected: self.selector(),
            }),
        }
    }

    /// Parses a value literal: `T`, `F`, `U`, `O` (the extrema, in every
    /// bilattice), `<b,d>` for products and `[lo,hi]` for intervals.
    pub fn parse_value(self, text: &str) -> Result<TruthValue, BilatticeError> {
        let text = text.trim();
        let bad = || BilatticeError::BadLiteral {
            literal: text.to_string(),
            expected: self.selector(),
        };
        let mut chars = text.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            return Four::from_symbol(c).map(|v| self.named(v)).ok_or_else(bad);
        }
        if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
            let (b, d) = inner.split_once(',').ok_or_else(bad)?;
            return self.pair(b, d);
        }
        if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let (lo, hi) = inner.split_once(',').ok_or_else(bad)?;
            return self.interval(lo, hi);
        }
        Err(bad())
    }

    /// All elements, for carriers small enough to enumerate (`None` otherwise).
    pub fn elements(self) -> Option<Vec<TruthValue>> {
        const LIMIT: u64 = 4096;
        let levels =
            |l: BaseLattice| -> Vec<Level> { (0..=l.top_rank()).map(|r| l.level(r).expect("rank in range")).collect() };
        match self {
            Bilattice::Four => Some(Four::ALL.iter().map(|&v| v.into()).collect()),
            Bilattice::Product(l1, l2) => {
                let n = (u64::from(l1.top_rank()) + 1) * (u64::from(l2.top_rank()) + 1);
                (n <= LIMIT).then(|| {
                    let doubts = levels(l2);
                    levels(l1)
                        .into_iter()
                        .flat_map(|b| doubts.iter().map(move |&d| TruthValue::Pair(Pair::new(b, d))))
                        .collect()
                })
            }
            Bilattice::Interval(l) => {
                let n = (u64::from(l.top_rank()) + 1).pow(2);
                (n <= LIMIT).then(|| {
                    let his = levels(l);
                    levels(l)
                        .into_iter()
                        .flat_map(|lo| his.iter().map(move |&hi| TruthValue::Interval(Interval { lo, hi })))
                        .collect()
                })
            }
        }
    }
}

impl fmt::Display for Bilattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.selector())
    }
}
