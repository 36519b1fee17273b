//! Extended reals `ℝ ∪ {+∞}`.
//!
//! Expectations such as `E[(a - ess_inf)^{-2}]` are routinely infinite and
//! that infinity carries meaning (it decides phase boundaries and which branch
//! of a closed form applies). `ExtReal` keeps those values explicit and never
//! holds a NaN.

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Serialize, Serializer};

/// A real number or `+∞`. Never NaN, never `-∞`.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    /// Wraps a finite value or `+∞`.
    ///
    /// # Panics
    /// On NaN or `-∞`; both indicate a bug upstream.
    pub fn new(v: f64) -> Self {
        assert!(!v.is_nan(), "ExtReal::new(NaN)");
        assert!(v != f64::NEG_INFINITY, "ExtReal::new(-inf)");
        ExtReal(v)
    }

    pub fn finite(v: f64) -> Self {
        debug_assert!(v.is_finite());
        ExtReal(v)
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        !self.0.is_finite()
    }

    /// Raw value, `f64::INFINITY` for `+∞`.
    pub fn value(self) -> f64 {
        self.0
    }

    /// `Some(x)` when finite.
    pub fn to_finite(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    /// Scales by a nonnegative factor. `0 · ∞ = 0` (a zero weight removes the term).
    pub fn scale(self, c: f64) -> Self {
        debug_assert!(c >= 0.0);
        if c == 0.0 {
            ExtReal::ZERO
        } else {
            ExtReal(self.0 * c)
        }
    }

    /// `ln(x)` for `x > 0`; `ln(∞) = ∞`.
    pub fn ln(self) -> Self {
        debug_assert!(self.0 > 0.0);
        ExtReal::new(self.0.ln())
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal::new(v)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        ExtReal(self.0 + rhs.0)
    }
}

impl Mul for ExtReal {
    type Output = ExtReal;
    /// Both operands are `≥ 0` wherever this is used; `0 · ∞ = 0`.
    fn mul(self, rhs: ExtReal) -> ExtReal {
        if self.0 == 0.0 || rhs.0 == 0.0 {
            ExtReal::ZERO
        } else {
            ExtReal(self.0 * rhs.0)
        }
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{:?}", self.0)
        } else {
            f.write_str("+inf")
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            fmt::Display::fmt(&self.0, f)
        } else {
            f.write_str("inf")
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}
