//! Flow amounts: either `f64` with a relative tolerance, or exact rationals.

use core::fmt::{Debug, Display};
use core::ops::{Add, AddAssign, Div, Mul, Sub};

use num_rational::Ratio;

/// Exact rational amount. Desk-scale constructions only ever divide by
/// powers of `p` and `p - 2`, which stay far inside `i128`.
pub type Exact = Ratio<i128>;

/// Arithmetic needed to build and audit flows.
pub trait Amount:
    Copy
    + Debug
    + Display
    + PartialOrd
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Whether equality checks are exact (tolerance is ignored).
    const EXACT: bool;

    fn zero() -> Self;

    fn from_frac(num: i64, den: i64) -> Self;

    fn from_count(count: usize) -> Self {
        Self::from_frac(count as i64, 1)
    }

    fn to_f64(self) -> f64;

    fn is_zero(self) -> bool {
        self == Self::zero()
    }

    fn abs(self) -> Self {
        if self < Self::zero() {
            Self::zero() - self
        } else {
            self
        }
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `|self - other| <= tol * scale`, or exact equality for exact types.
    fn close_to(self, other: Self, tol: f64, scale: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self - other).abs().to_f64() <= tol * scale
        }
    }
}

impl Amount for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn from_frac(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl Amount for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        Ratio::from_integer(0)
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }

    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_ignores_tolerance() {
        let third = Exact::from_frac(1, 3);
        let approx = Exact::from_frac(333_333_333, 1_000_000_000);
        assert!(!third.close_to(approx, 1.0, 1.0));
        assert!(third.close_to(Exact::from_frac(2, 6), 0.0, 1.0));
    }

    #[test]
    fn float_relative_tolerance() {
        assert!(1.0f64.close_to(1.0 + 1e-12, 1e-9, 1.0));
        assert!(!1.0f64.close_to(1.0 + 1e-6, 1e-9, 1.0));
        assert!(1e6f64.close_to(1e6 + 1e-4, 1e-9, 1e6));
    }
}
