//! Nonnegative extended reals `[0, ∞]`.
//!
//! Young functions may take the value `∞`, and so may the modulars built on
//! top of them. [`ExtNonneg`] keeps infinity as a separate tag instead of
//! overloading `f64::INFINITY`, and fixes the arithmetic conventions:
//! `x + ∞ = ∞`, `0 · ∞ = 0`, `∞ / ∞` is left to the caller.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A value in `[0, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtNonneg {
    Finite(f64),
    Infinite,
}

impl ExtNonneg {
    pub const ZERO: ExtNonneg = ExtNonneg::Finite(0.0);

    /// Wraps a float. `+inf` (e.g. an overflowed `exp`) becomes [`ExtNonneg::Infinite`];
    /// negative values and NaN are clamped to zero.
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtNonneg::Infinite
        } else if x > 0.0 {
            ExtNonneg::Finite(x)
        } else {
            ExtNonneg::ZERO
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNonneg::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtNonneg::Finite(x) => Some(x),
            ExtNonneg::Infinite => None,
        }
    }

    /// Lossy view as a float (`∞ ↦ f64::INFINITY`), for reporting and fitting.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtNonneg::Finite(x) => x,
            ExtNonneg::Infinite => f64::INFINITY,
        }
    }

    /// Multiplication by a finite nonnegative scalar, with `0 · ∞ = 0`.
    pub fn scale(self, c: f64) -> Self {
        debug_assert!(c >= 0.0);
        match self {
            ExtNonneg::Finite(x) => ExtNonneg::from_f64(x * c),
            ExtNonneg::Infinite if c == 0.0 => ExtNonneg::ZERO,
            ExtNonneg::Infinite => ExtNonneg::Infinite,
        }
    }

    /// `self / other` on `[0, ∞]` with `∞/∞ = 1` and `0/0 = 0`, the conventions
    /// used by ratio tests such as `Φ(2x)/Φ(x)`.
    pub fn ratio(self, other: ExtNonneg) -> ExtNonneg {
        match (self, other) {
            (ExtNonneg::Infinite, ExtNonneg::Infinite) => ExtNonneg::Finite(1.0),
            (ExtNonneg::Infinite, _) => ExtNonneg::Infinite,
            (ExtNonneg::Finite(_), ExtNonneg::Infinite) => ExtNonneg::ZERO,
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => {
                if b == 0.0 {
                    if a == 0.0 {
                        ExtNonneg::ZERO
                    } else {
                        ExtNonneg::Infinite
                    }
                } else {
                    ExtNonneg::from_f64(a / b)
                }
            }
        }
    }

    /// `self ≤ bound · (1 + rel) + abs`, false when `self = ∞ > bound`.
    pub fn le_within(self, bound: ExtNonneg, rel: f64, abs: f64) -> bool {
        match (self, bound) {
            (_, ExtNonneg::Infinite) => true,
            (ExtNonneg::Infinite, ExtNonneg::Finite(_)) => false,
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => a <= b * (1.0 + rel) + abs,
        }
    }

    pub fn max(self, other: ExtNonneg) -> ExtNonneg {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: ExtNonneg) -> ExtNonneg {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl Default for ExtNonneg {
    fn default() -> Self {
        ExtNonneg::ZERO
    }
}

impl From<f64> for ExtNonneg {
    fn from(x: f64) -> Self {
        ExtNonneg::from_f64(x)
    }
}

impl PartialOrd for ExtNonneg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(match (self, other) {
            (ExtNonneg::Infinite, ExtNonneg::Infinite) => Ordering::Equal,
            (ExtNonneg::Infinite, _) => Ordering::Greater,
            (_, ExtNonneg::Infinite) => Ordering::Less,
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => a.total_cmp(b),
        })
    }
}

impl PartialEq<f64> for ExtNonneg {
    fn eq(&self, other: &f64) -> bool {
        self.finite() == Some(*other)
    }
}

impl PartialOrd<f64> for ExtNonneg {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.partial_cmp(&ExtNonneg::from_f64(*other))
    }
}

impl Add for ExtNonneg {
    type Output = ExtNonneg;

    fn add(self, rhs: ExtNonneg) -> ExtNonneg {
        match (self, rhs) {
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => ExtNonneg::from_f64(a + b),
            _ => ExtNonneg::Infinite,
        }
    }
}

impl Mul for ExtNonneg {
    type Output = ExtNonneg;

    fn mul(self, rhs: ExtNonneg) -> ExtNonneg {
        match (self, rhs) {
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => ExtNonneg::from_f64(a * b),
            (ExtNonneg::Finite(a), ExtNonneg::Infinite) | (ExtNonneg::Infinite, ExtNonneg::Finite(a)) => {
                ExtNonneg::Infinite.scale(a)
            }
            (ExtNonneg::Infinite, ExtNonneg::Infinite) => ExtNonneg::Infinite,
        }
    }
}

impl Sum for ExtNonneg {
    fn sum<I: Iterator<Item = ExtNonneg>>(iter: I) -> ExtNonneg {
        iter.fold(ExtNonneg::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for ExtNonneg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNonneg::Finite(x) => write!(f, "{x}"),
            ExtNonneg::Infinite => f.write_str("inf"),
        }
    }
}

// Finite values serialize as JSON numbers, infinity as the string "inf".
impl Serialize for ExtNonneg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNonneg::Finite(x) => s.serialize_f64(*x),
            ExtNonneg::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNonneg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) if x >= 0.0 => Ok(ExtNonneg::Finite(x)),
            Repr::Num(x) => Err(serde::de::Error::custom(format!("negative value {x}"))),
            Repr::Str(s) if s == "inf" => Ok(ExtNonneg::Infinite),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("expected \"inf\", got {s:?}"))),
        }
    }
}
