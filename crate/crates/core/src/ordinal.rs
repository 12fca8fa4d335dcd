//! Ordinals below ω², written ω·k + c.
//!
//! Addition is ordinal addition: a finite summand on the left is absorbed by
//! an infinite one on the right, so `1 + ω = ω` while `ω + 1 > ω`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("no x satisfies {subtrahend} + x = {minuend}")]
    NotSubtractable { minuend: Ord2, subtrahend: Ord2 },
    #[error("invalid ordinal literal `{0}`")]
    BadLiteral(String),
}

/// The ordinal ω·`degree` + `shift`.
///
/// Every pair of naturals is a canonical value, and the derived ordering is
/// the lexicographic one on `(degree, shift)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ord2 {
    pub degree: u64,
    pub shift: u64,
}

impl Ord2 {
    pub const ZERO: Ord2 = Ord2 {
        degree: 0,
        shift: 0,
    };
    pub const OMEGA: Ord2 = Ord2 {
        degree: 1,
        shift: 0,
    };

    pub const fn new(degree: u64, shift: u64) -> Self {
        Ord2 { degree, shift }
    }

    pub const fn finite(n: u64) -> Self {
        Ord2 {
            degree: 0,
            shift: n,
        }
    }

    /// ω·k
    pub const fn omega_times(k: u64) -> Self {
        Ord2 {
            degree: k,
            shift: 0,
        }
    }

    pub fn is_finite(self) -> bool {
        self.degree == 0
    }

    pub fn is_zero(self) -> bool {
        self == Ord2::ZERO
    }

    /// Ordinal sum, or `None` if a component would overflow.
    pub fn checked_add(self, rhs: Ord2) -> Option<Ord2> {
        if rhs.degree > 0 {
            Some(Ord2::new(self.degree.checked_add(rhs.degree)?, rhs.shift))
        } else {
            Some(Ord2::new(self.degree, self.shift.checked_add(rhs.shift)?))
        }
    }

    /// The least `x` with `subtrahend + x = self`.
    ///
    /// Such an `x` exists exactly when `subtrahend <= self`. When the degrees
    /// differ the solution is infinite and unique; no finite amount can be
    /// "taken off" an infinite value from the left.
    pub fn left_sub(self, subtrahend: Ord2) -> Result<Ord2, OrdinalError> {
        if self < subtrahend {
            return Err(OrdinalError::NotSubtractable {
                minuend: self,
                subtrahend,
            });
        }
        if self.degree == subtrahend.degree {
            Ok(Ord2::finite(self.shift - subtrahend.shift))
        } else {
            Ok(Ord2::new(self.degree - subtrahend.degree, self.shift))
        }
    }
}

impl Add for Ord2 {
    type Output = Ord2;

    /// Panics on overflow; wrapping would silently reorder states.
    fn add(self, rhs: Ord2) -> Ord2 {
        self.checked_add(rhs)
            .unwrap_or_else(|| panic!("ordinal overflow computing {self} + {rhs}"))
    }
}

pub fn add(a: Ord2, b: Ord2) -> Ord2 {
    a + b
}

pub fn left_sub(a: Ord2, b: Ord2) -> Result<Ord2, OrdinalError> {
    a.left_sub(b)
}

pub fn cmp(a: Ord2, b: Ord2) -> Ordering {
    a.cmp(&b)
}

impl fmt::Display for Ord2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.degree, self.shift) {
            (0, c) => write!(f, "{c}"),
            (1, 0) => write!(f, "w"),
            (1, c) => write!(f, "w+{c}"),
            (k, 0) => write!(f, "w*{k}"),
            (k, c) => write!(f, "w*{k}+{c}"),
        }
    }
}

impl FromStr for Ord2 {
    type Err = OrdinalError;

    /// Accepts `C`, `w`, `w+C`, `w*K` and `w*K+C`; whitespace is ignored.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || OrdinalError::BadLiteral(text.trim().to_string());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let nat = |s: &str| -> Result<u64, OrdinalError> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            s.parse().map_err(|_| bad())
        };

        let Some(rest) = compact.strip_prefix('w') else {
            return Ok(Ord2::finite(nat(&compact)?));
        };
        let (degree, rest) = match rest.strip_prefix('*') {
            Some(tail) => {
                let end = tail.find('+').unwrap_or(tail.len());
                (nat(&tail[..end])?, &tail[end..])
            }
            None => (1, rest),
        };
        let shift = match rest {
            "" => 0,
            _ => nat(rest.strip_prefix('+').ok_or_else(bad)?)?,
        };
        Ok(Ord2::new(degree, shift))
    }
}
