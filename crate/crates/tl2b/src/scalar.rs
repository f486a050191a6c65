//! Coefficient field abstraction.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::{det_bareiss, Matrix};

/// A field element usable as a matrix or diagram coefficient.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn from_i64(n: i64) -> Self;

    /// Equality used by audits. Exact for exact backends.
    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn render(&self) -> String;

    /// Exact determinant; the default is plain elimination.
    fn det(m: &Matrix<Self>) -> Self {
        m.det_gauss()
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    /// Integer power; `None` for a negative power of zero.
    fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.clone() * &sq;
            }
        }
        Some(acc)
    }
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn det(m: &Matrix<Self>) -> Self {
        det_bareiss(m)
    }
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn same(&self, other: &Self) -> bool {
        let scale = 1.0f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= 1e-9 * scale
    }

    fn render(&self) -> String {
        format!("{self:e}")
    }
}

/// Parse "p/q" or "p" into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Rational with small numerator and denominator, for tests and literals.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_handles_negative_exponents() {
        let x = rat(3, 2);
        assert_eq!(x.powi(-3).unwrap(), rat(8, 27));
        assert_eq!(x.powi(0).unwrap(), rat(1, 1));
        assert!(BigRational::zero().powi(-1).is_none());
    }

    #[test]
    fn rational_round_trip() {
        let x = rat(-14, 6);
        assert_eq!(x.render(), "-7/3");
        assert_eq!(parse_rational(&x.render()).unwrap(), x);
        assert_eq!(parse_rational("5").unwrap(), rat(5, 1));
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn float_equality_is_tolerant() {
        assert!(0.1f64.same(&(0.3 - 0.2)));
        assert!(!1.0f64.same(&1.001));
    }
}
