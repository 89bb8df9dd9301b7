//! Base lattices used by the product and interval constructions.
//!
//! Every supported base lattice is a finite chain `0 < 1 < ... < top`, so a
//! level is just a rank. The unit interval is the chain of decimals in
//! `[0, 1]` with nine fractional digits, which keeps every comparison exact.

use std::fmt;

use super::BilatticeError;

/// Number of ranks per unit in [`BaseLattice::Unit`].
pub const UNIT_SCALE: u32 = 1_000_000_000;
const UNIT_DIGITS: usize = 9;

/// A complete lattice supplied as a built-in base for a bilattice construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseLattice {
    /// The two-point lattice `0 < 1` (false < true).
    Bool,
    /// The chain `{0, 1, ..., n}` with `n >= 1`.
    Chain(u32),
    /// The unit interval `[0, 1]` with exact decimal coordinates.
    Unit,
}

impl BaseLattice {
    /// Looks up a base lattice by its selector name: `bool`, `unit` or `chainN`.
    pub fn from_name(name: &str) -> Result<Self, BilatticeError> {
        match name {
            "bool" | "two" => Ok(BaseLattice::Bool),
            "unit" => Ok(BaseLattice::Unit),
            _ => {
                let n = name
                    .strip_prefix("chain")
                    .and_then(|n| n.parse::<u32>().ok())
                    .filter(|n| (1..UNIT_SCALE).contains(n))
                    .ok_or_else(|| BilatticeError::UnknownBase(name.to_string()))?;
                Ok(BaseLattice::Chain(n))
            }
        }
    }

    pub fn name(self) -> String {
        match self {
            BaseLattice::Bool => "bool".to_string(),
            BaseLattice::Chain(n) => format!("chain{n}"),
            BaseLattice::Unit => "unit".to_string(),
        }
    }

    /// Rank of the top element.
    pub fn top_rank(self) -> u32 {
        match self {
            BaseLattice::Bool => 1,
            BaseLattice::Chain(n) => n,
            BaseLattice::Unit => UNIT_SCALE,
        }
    }

    pub fn bottom(self) -> Level {
        Level { base: self, rank: 0 }
    }

    pub fn top(self) -> Level {
        Level {
            base: self,
            rank: self.top_rank(),
        }
    }

    pub fn is_finite(self) -> bool {
        !matches!(self, BaseLattice::Unit)
    }

    /// Builds a level from a raw rank.
    pub fn level(self, rank: u32) -> Result<Level, BilatticeError> {
        if rank <= self.top_rank() {
            Ok(Level { base: self, rank })
        } else {
            Err(BilatticeError::BadLiteral {
                literal: rank.to_string(),
                expected: self.name(),
            })
        }
    }

    /// Parses a level literal. `bool` accepts `0`, `1`, `false`, `true`;
    /// chains accept integers; `unit` accepts decimals such as `0.75`.
    pub fn parse_level(self, text: &str) -> Result<Level, BilatticeError> {
        let bad = || BilatticeError::BadLiteral {
            literal: text.to_string(),
            expected: self.name(),
        };
        let rank = match self {
            BaseLattice::Bool => match text {
                "0" | "false" => 0,
                "1" | "true" => 1,
                _ => return Err(bad()),
            },
            BaseLattice::Chain(n) => {
                let r = text.parse::<u32>().map_err(|_| bad())?;
                if r > n {
                    return Err(bad());
                }
                r
            }
            BaseLattice::Unit => parse_unit(text).ok_or_else(bad)?,
        };
        Ok(Level { base: self, rank })
    }
}

impl fmt::Display for BaseLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn parse_unit(text: &str) -> Option<u32> {
    let (int, frac) = match text.split_once('.') {
        Some((i, fr)) => (i, fr),
        None => (text, ""),
    };
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if frac.len() > UNIT_DIGITS || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if text.ends_with('.') {
        return None;
    }
    let int: u64 = int.parse().ok()?;
    let mut frac_rank: u64 = 0;
    for (i, b) in frac.bytes().enumerate() {
        frac_rank += u64::from(b - b'0') * 10u64.pow((UNIT_DIGITS - 1 - i) as u32);
    }
    let rank = int.checked_mul(u64::from(UNIT_SCALE))?.checked_add(frac_rank)?;
    (rank <= u64::from(UNIT_SCALE)).then_some(rank as u32)
}

/// An element of a base lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    base: BaseLattice,
    rank: u32,
}

impl Level {
    pub fn base(self) -> BaseLattice {
        self.base
    }

    pub fn rank(self) -> u32 {
        self.rank
    }

    /// Order-reversing involution `x ↦ top - x`.
    pub fn complement(self) -> Level {
        Level {
            base: self.base,
            rank: self.base.top_rank() - self.rank,
        }
    }

    /// Chain order. Callers ensure both levels share a base.
    pub(crate) fn le(self, other: Level) -> bool {
        self.rank <= other.rank
    }

    pub(crate) fn min(self, other: Level) -> Level {
        if self.rank <= other.rank {
            self
        } else {
            other
        }
    }

    pub(crate) fn max(self, other: Level) -> Level {
        if self.rank >= other.rank {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            BaseLattice::Bool | BaseLattice::Chain(_) => write!(f, "{}", self.rank),
            BaseLattice::Unit => {
                let int = self.rank / UNIT_SCALE;
                let frac = self.rank % UNIT_SCALE;
                if frac == 0 {
                    write!(f, "{int}")
                } else {
                    let digits = format!("{frac:0width$}", width = UNIT_DIGITS);
                    write!(f, "{int}.{}", digits.trim_end_matches('0'))
                }
            }
        }
    }
}
