//! Belnap's logic FOUR.

use std::fmt;

/// The four truth values: false, true, underdefined (no information) and
/// overdefined (conflicting information).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Four {
    False,
    True,
    Under,
    Over,
}

use Four::*;

impl Four {
    pub const ALL: [Four; 4] = [False, True, Under, Over];

    /// `F <=t U <=t T` and `F <=t O <=t T`; `U` and `O` are incomparable.
    pub fn leq_t(self, other: Four) -> bool {
        match (self, other) {
            (a, b) if a == b => true,
            (False, _) | (_, True) => true,
            _ => false,
        }
    }

    /// `U <=k F <=k O` and `U <=k T <=k O`; `F` and `T` are incomparable.
    pub fn leq_k(self, other: Four) -> bool {
        match (self, other) {
            (a, b) if a == b => true,
            (Under, _) | (_, Over) => true,
            _ => false,
        }
    }

    /// Truth meet `∧`.
    pub fn and(self, other: Four) -> Four {
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, x) | (x, True) => x,
            (Under, Under) => Under,
            (Over, Over) => Over,
            (Under, Over) | (Over, Under) => False,
        }
    }

    /// Truth join `∨`.
    pub fn or(self, other: Four) -> Four {
        match (self, other) {
            (True, _) | (_, True) => True,
            (False, x) | (x, False) => x,
            (Under, Under) => Under,
            (Over, Over) => Over,
            (Under, Over) | (Over, Under) => True,
        }
    }

    /// Knowledge meet `⊗` (consensus).
    pub fn consensus(self, other: Four) -> Four {
        match (self, other) {
            (Under, _) | (_, Under) => Under,
            (Over, x) | (x, Over) => x,
            (False, False) => False,
            (True, True) => True,
            (False, True) | (True, False) => Under,
        }
    }

    /// Knowledge join `⊕` (gullibility).
    pub fn gullibility(self, other: Four) -> Four {
        match (self, other) {
            (Over, _) | (_, Over) => Over,
            (Under, x) | (x, Under) => x,
            (False, False) => False,
            (True, True) => True,
            (False, True) | (True, False) => Over,
        }
    }

    pub fn negate(self) -> Four {
        match self {
            True => False,
            False => True,
            x => x,
        }
    }

    pub fn conflate(self) -> Four {
        match self {
            Under => Over,
            Over => Under,
            x => x,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            False => 'F',
            True => 'T',
            Under => 'U',
            Over => 'O',
        }
    }

    pub fn from_symbol(c: char) -> Option<Four> {
        match c {
            'F' => Some(False),
            'T' => Some(True),
            'U' => Some(Under),
            'O' => Some(Over),
            _ => None,
        }
    }
}

impl fmt::Display for Four {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}
