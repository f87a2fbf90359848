//! Exact arithmetic in the quadratic extension Q[sqrt(2)].
//!
//! Inner products of dyadically scaled functions land in this ring: the
//! rational part and the sqrt(2) part are tracked separately and never mixed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::rational::{to_f64, Rational};

/// `a + b * sqrt(2)` with exact rational components.
///
/// Equality is component-wise (valid because sqrt(2) is irrational).
/// `to_f64` is the only lossy operation; its relative error stays below
/// 2^-50 when at most one component is nonzero, which is the only case the
/// eigensolver consumes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
}

impl QuadraticNumber {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        Self { a, b: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    /// sqrt(2)^exp for exp >= 0: even exponents are rational, odd carry sqrt(2).
    pub fn sqrt2_power(exp: u32) -> Self {
        let half = crate::rational::pow2((exp / 2) as i64);
        if exp % 2 == 0 {
            Self::from_rational(half)
        } else {
            Self::new(Rational::zero(), half)
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * std::f64::consts::SQRT_2
    }
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        // (a + b s)(c + d s) = ac + 2bd + (ad + bc) s, s = sqrt(2)
        let a = &self.a * &rhs.a + (&self.b * &rhs.b) * crate::rational::rat_int(2);
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadraticNumber::new(a, b)
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber::new(-self.a.clone(), -self.b.clone())
    }
}

impl fmt::Display for QuadraticNumber {
    /// Renders as `a+b*sqrt2` with the sign of `b` folded into the separator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::Signed;
        if self.b.is_negative() {
            write!(f, "{}-{}*sqrt2", self.a, -self.b.clone())
        } else {
            write!(f, "{}+{}*sqrt2", self.a, self.b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn ring_operations() {
        let x = QuadraticNumber::new(rat(1, 2), rat(1, 3));
        let y = QuadraticNumber::new(rat(-1, 4), rat_int(2));
        assert_eq!(&x + &y, QuadraticNumber::new(rat(1, 4), rat(7, 3)));
        assert_eq!(&x - &y, QuadraticNumber::new(rat(3, 4), rat(-5, 3)));
        // (1/2 + s/3)(-1/4 + 2s) = -1/8 + 4/3 + s(1 - 1/12)
        assert_eq!(
            &x * &y,
            QuadraticNumber::new(rat(-1, 8) + rat(4, 3), rat_int(1) - rat(1, 12))
        );
    }

    #[test]
    fn sqrt2_powers() {
        assert_eq!(QuadraticNumber::sqrt2_power(0), QuadraticNumber::from_rational(rat_int(1)));
        assert_eq!(QuadraticNumber::sqrt2_power(2), QuadraticNumber::from_rational(rat_int(2)));
        assert_eq!(QuadraticNumber::sqrt2_power(3), QuadraticNumber::new(rat_int(0), rat_int(2)));
        let s = QuadraticNumber::sqrt2_power(1);
        assert_eq!(&s * &s, QuadraticNumber::from_rational(rat_int(2)));
    }

    #[test]
    fn float_conversion() {
        let v = QuadraticNumber::new(rat_int(0), rat(1, 2));
        assert!((v.to_f64() - std::f64::consts::SQRT_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn display_format() {
        assert_eq!(QuadraticNumber::new(rat(4, 3), rat_int(0)).to_string(), "4/3+0*sqrt2");
        assert_eq!(QuadraticNumber::new(rat_int(0), rat(-1, 2)).to_string(), "0-1/2*sqrt2");
    }
}
