//! Gaussian integers `a + bi` with arbitrary-precision parts.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Self {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn real(re: impl Into<BigInt>) -> Self {
        Self::new(re, 0)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Largest absolute value among the two parts.
    pub fn max_abs(&self) -> BigInt {
        self.re.abs().max(self.im.abs())
    }

    /// `self / 2` when both parts are even.
    pub fn halve(&self) -> Option<Self> {
        if self.re.is_even() && self.im.is_even() {
            Some(Self {
                re: &self.re >> 1,
                im: &self.im >> 1,
            })
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl From<i64> for GaussInt {
    fn from(v: i64) -> Self {
        Self::real(v)
    }
}

impl Zero for GaussInt {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussInt {
    fn one() -> Self {
        Self::real(1)
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: GaussInt) -> GaussInt {
        &self + &rhs
    }
}

impl Add<&GaussInt> for &GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl AddAssign<&GaussInt> for GaussInt {
    fn add_assign(&mut self, rhs: &GaussInt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: GaussInt) -> GaussInt {
        &self - &rhs
    }
}

impl Sub<&GaussInt> for &GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: GaussInt) -> GaussInt {
        &self * &rhs
    }
}

impl Mul<&GaussInt> for &GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: &GaussInt) -> GaussInt {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussInt::real(&self.re * &rhs.re);
        }
        GaussInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => write!(f, "{}-{}i", self.re, -&self.im),
            (false, false) => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = GaussInt::new(1, 2);
        let b = GaussInt::new(3, -1);
        assert_eq!(&a * &b, GaussInt::new(5, 5));
        assert_eq!(&a + &b, GaussInt::new(4, 1));
        assert_eq!(&a - &b, GaussInt::new(-2, 3));
        assert_eq!(&GaussInt::i() * &GaussInt::i(), GaussInt::real(-1));
        assert_eq!(a.conj(), GaussInt::new(1, -2));
        assert_eq!(GaussInt::new(-4, 7).max_abs(), BigInt::from(7));
    }

    #[test]
    fn halving() {
        assert_eq!(GaussInt::new(4, -2).halve(), Some(GaussInt::new(2, -1)));
        assert_eq!(GaussInt::new(-6, 0).halve(), Some(GaussInt::real(-3)));
        assert_eq!(GaussInt::new(1, 2).halve(), None);
    }

    #[test]
    fn display() {
        assert_eq!(GaussInt::new(2, -1).to_string(), "2-1i");
        assert_eq!(GaussInt::new(0, 3).to_string(), "3i");
        assert_eq!(GaussInt::real(-1).to_string(), "-1");
    }
}
