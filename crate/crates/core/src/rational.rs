//! Exact rational time values.
//!
//! Every temporal coordinate is a [`Rational`] so that parallelism (time
//! equality) is decidable. Arithmetic is checked: a result that does not fit
//! in 64-bit numerator/denominator is reported as [`Error::Overflow`] instead
//! of wrapping or panicking.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};

use crate::error::{Error, Result};

/// A rational number in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));
    pub const HALF: Rational = Rational(Ratio::new_raw(1, 2));

    /// Builds `numer/denom`, reducing to lowest terms.
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        if numer == i64::MIN || denom == i64::MIN {
            return Err(Error::Overflow);
        }
        Ok(Rational(Ratio::new(numer, denom)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        self.0.checked_add(&rhs.0).map(Rational).ok_or(Error::Overflow)
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        self.0.checked_sub(&rhs.0).map(Rational).ok_or(Error::Overflow)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        self.0.checked_mul(&rhs.0).map(Rational).ok_or(Error::Overflow)
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::InvalidParameter("division by zero".into()));
        }
        self.0.checked_div(&rhs.0).map(Rational).ok_or(Error::Overflow)
    }

    /// `|self - rhs|`.
    pub fn abs_diff(self, rhs: Self) -> Result<Self> {
        let d = self.checked_sub(rhs)?;
        if d.0.is_negative() {
            Rational::ZERO.checked_sub(d)
        } else {
            Ok(d)
        }
    }

    pub fn to_f64(self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Rational::new(n, 1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = Rational::new(6, -4).unwrap();
        assert_eq!((r.numer(), r.denom()), (-3, 2));
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::new(4, 2).unwrap().to_string(), "2");
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/2".parse::<Rational>().unwrap(), Rational::new(3, 2).unwrap());
        assert_eq!("-7".parse::<Rational>().unwrap(), Rational::integer(-7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert!("1.5".parse::<Rational>().is_err());
    }

    #[test]
    fn overflow_is_an_error() {
        let big = Rational::integer(i64::MAX);
        assert!(matches!(big.checked_add(Rational::ONE), Err(Error::Overflow)));
        assert!(matches!(Rational::new(i64::MIN, 1), Err(Error::Overflow)));
    }

    #[test]
    fn abs_diff_is_symmetric() {
        let a = Rational::new(3, 5).unwrap();
        let b = Rational::new(6, 5).unwrap();
        assert_eq!(a.abs_diff(b).unwrap(), b.abs_diff(a).unwrap());
        assert_eq!(a.abs_diff(b).unwrap(), a);
    }
}
