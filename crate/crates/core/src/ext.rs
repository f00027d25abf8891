use std::fmt;
use std::ops::{Add, Sub};

/// An integer or `+inf`. Unreachable dual distances and empty minima are
/// `Infinite`; nothing is ever encoded as a large sentinel number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    Finite(i64),
    Infinite,
}

impl Ext {
    pub const ZERO: Ext = Ext::Finite(0);

    pub fn finite(self) -> Option<i64> {
        match self {
            Ext::Finite(x) => Some(x),
            Ext::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Ext::Finite(x) if x < 0)
    }
}

impl From<i64> for Ext {
    fn from(x: i64) -> Self {
        Ext::Finite(x)
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, rhs: Ext) -> Ext {
        match (self, rhs) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a + b),
            _ => Ext::Infinite,
        }
    }
}

impl Add<i64> for Ext {
    type Output = Ext;
    fn add(self, rhs: i64) -> Ext {
        match self {
            Ext::Finite(a) => Ext::Finite(a + rhs),
            Ext::Infinite => Ext::Infinite,
        }
    }
}

impl Sub<i64> for Ext {
    type Output = Ext;
    fn sub(self, rhs: i64) -> Ext {
        match self {
            Ext::Finite(a) => Ext::Finite(a - rhs),
            Ext::Infinite => Ext::Infinite,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Finite(x) => write!(f, "{x}"),
            Ext::Infinite => f.write_str("inf"),
        }
    }
}
