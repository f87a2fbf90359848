//! Piecewise polynomials carrying a dyadic normalization factor.
//!
//! An affine element `2^{k/2} f(2^k t - j)` keeps its function data rational;
//! the irrational factor lives only in the exponent. Inner products of two
//! such elements therefore land exactly in Q[sqrt(2)].

use crate::poly::PiecewisePoly;
use crate::quadratic::QuadraticNumber;

/// `2^{sqrt2_exponent / 2} * poly` with `poly` exact rational.
#[derive(Clone, Debug)]
pub struct ScaledPoly {
    poly: PiecewisePoly,
    sqrt2_exponent: u32,
}

impl ScaledPoly {
    pub fn new(poly: PiecewisePoly, sqrt2_exponent: u32) -> Self {
        Self { poly, sqrt2_exponent }
    }

    pub fn from_poly(poly: PiecewisePoly) -> Self {
        Self { poly, sqrt2_exponent: 0 }
    }

    pub fn poly(&self) -> &PiecewisePoly {
        &self.poly
    }

    pub fn sqrt2_exponent(&self) -> u32 {
        self.sqrt2_exponent
    }

    /// Exact inner product: `2^{(k_f + k_g)/2}` times the rational pairing.
    pub fn inner_product(&self, other: &ScaledPoly) -> QuadraticNumber {
        let ip = self.poly.inner_product(&other.poly);
        if ip == num_traits::Zero::zero() {
            return QuadraticNumber::zero();
        }
        let scale = QuadraticNumber::sqrt2_power(self.sqrt2_exponent + other.sqrt2_exponent);
        &scale * &QuadraticNumber::from_rational(ip)
    }

    pub fn norm_sq(&self) -> QuadraticNumber {
        self.inner_product(self)
    }
}
