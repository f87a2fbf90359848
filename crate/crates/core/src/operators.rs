//! The dilation-modulation operator algebra and the spline generators.
//!
//! The building blocks are `W0 f(t) = f(2t)`, `W1 f(t) = r(t) f(2t)` (with r
//! the basic square wave), the Volterra antiderivative, and the combined step
//! `U = 4 W1 V` that integrates and antiperiodizes in one move. Iterating U on
//! the square wave produces the spline generators; the affine elements
//! `2^{k/2} f(2^k t - j)` tile them over the dyadic tree.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::index::{natural_index, rademacher, split_scale, walsh_fn, MultiIndex};
use crate::poly::{compose_affine, PiecewisePoly};
use crate::rational::{pow2, rat_int, Rational};
use crate::scaled::ScaledPoly;

/// The basic square wave r (sign of sin 2 pi t) at level 1.
pub fn square_wave() -> PiecewisePoly {
    rademacher(0, 1).expect("level 1 is enough for r")
}

/// The zero-mean sawtooth 1 - 2t on (0,1); the unique continuous function on
/// the open interval with a pure first-order square-wave expansion.
pub fn sawtooth() -> PiecewisePoly {
    PiecewisePoly::new(0, vec![vec![rat_int(1), rat_int(-2)]]).unwrap()
}

/// W0: dyadic dilation f(2t) of a 1-periodic function.
pub fn dilate(f: &PiecewisePoly) -> PiecewisePoly {
    let level = f.level() + 1;
    let half = 1u64 << f.level();
    let two = rat_int(2);
    let pieces = (0..2 * half)
        .map(|i| {
            let wrap = if i >= half { Rational::one() } else { Rational::zero() };
            compose_affine(&f.pieces()[(i % half) as usize], &two, &-wrap)
        })
        .collect();
    PiecewisePoly::new(level, pieces).expect("dilation stays within the level cap")
}

/// W1: dilation with modulation, r(t) f(2t); the output is 1/2-antiperiodic.
pub fn dilate_modulate(f: &PiecewisePoly) -> PiecewisePoly {
    let dilated = dilate(f);
    let count = dilated.piece_count();
    let pieces = dilated
        .pieces()
        .iter()
        .enumerate()
        .map(|(i, piece)| {
            if (i as u64) < count / 2 {
                piece.clone()
            } else {
                piece.iter().map(|c| -c).collect()
            }
        })
        .collect();
    PiecewisePoly::new(dilated.level(), pieces).unwrap()
}

/// One construction step `U f = 4 W1 V f`: integrate, then antiperiodize.
///
/// Rejects inputs with nonzero mean: their antiderivative is not 1-periodic,
/// so the result would be meaningless as periodic data.
pub fn integrate_antiperiodize(f: &PiecewisePoly) -> Result<PiecewisePoly> {
    if !f.mean().is_zero() {
        return Err(Error::NonzeroMean);
    }
    Ok(dilate_modulate(&f.volterra()).scale(&rat_int(4)))
}

/// The m-th spline generator together with its verified structure.
#[derive(Clone, Debug)]
pub struct SplineSpec {
    m: u32,
    kappa: Rational,
    poly: PiecewisePoly,
}

impl SplineSpec {
    pub fn m(&self) -> u32 {
        self.m
    }

    /// 2^{m(m+5)/2}, the leading constant of the m-th derivative.
    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn poly(&self) -> &PiecewisePoly {
        &self.poly
    }

    pub fn into_poly(self) -> PiecewisePoly {
        self.poly
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "kappa": self.kappa.numer().to_string(),
            "poly": self.poly.to_json(),
        })
    }

    /// Checks the defining equations and normalizations exactly.
    fn verify(&self) -> Result<()> {
        let m = self.m;
        // Derivatives of order 0..m-1 vanish at t = 0.
        let mut d = self.poly.clone();
        for mu in 0..m {
            if !d.eval(&Rational::zero()).is_zero() {
                return Err(Error::InvariantViolation(format!(
                    "spline {m}: derivative of order {mu} does not vanish at 0"
                )));
            }
            d = d.derivative();
        }
        // After m differentiations: kappa times the full square-wave product.
        let target = walsh_fn((1u64 << (m + 1)) - 1, m + 1)?.scale(&self.kappa);
        if !d.equals(&target) {
            return Err(Error::InvariantViolation(format!(
                "spline {m}: m-th derivative is not kappa times the square-wave product"
            )));
        }
        // Antiperiodicity and unit pairing with the square wave.
        if !is_antiperiodic(&self.poly) {
            return Err(Error::InvariantViolation(format!("spline {m}: not antiperiodic")));
        }
        if self.poly.inner_product(&square_wave()) != Rational::one() {
            return Err(Error::InvariantViolation(format!(
                "spline {m}: pairing with the square wave is not 1"
            )));
        }
        Ok(())
    }
}

/// Exact 1/2-antiperiodicity check: f(t + 1/2) = -f(t) as piecewise data.
pub fn is_antiperiodic(f: &PiecewisePoly) -> bool {
    let f = if f.level() == 0 { f.refine(1).unwrap() } else { f.clone() };
    f.rotate(f.piece_count() / 2).equals(&f.neg())
}

/// True when pieces and their derivatives up to `order` match at every knot,
/// including the periodic wrap at 1.
pub fn is_smooth_up_to(f: &PiecewisePoly, order: u32) -> bool {
    let mut d = f.clone();
    for _ in 0..=order {
        let count = d.piece_count();
        for i in 0..count {
            let knot = Rational::new(BigInt::from((i + 1) % count), BigInt::from(count));
            let left_limit = horner_at(&d.pieces()[i as usize], &if i + 1 == count {
                Rational::one()
            } else {
                knot.clone()
            });
            let right_limit = d.eval(&knot);
            if left_limit != right_limit {
                return false;
            }
        }
        d = d.derivative();
    }
    true
}

fn horner_at(coeffs: &[Rational], t: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

/// Builds the m-th spline generator by iterating the construction step on the
/// square wave, then verifies every defining property exactly.
pub fn build_spline(m: u32) -> Result<SplineSpec> {
    if m == 0 {
        return Err(Error::InvalidSplineOrder);
    }
    let mut poly = square_wave();
    for _ in 0..m {
        poly = integrate_antiperiodize(&poly)?;
    }
    let kappa = pow2((m as i64) * (m as i64 + 5) / 2);
    let spec = SplineSpec { m, kappa, poly };
    spec.verify()?;
    Ok(spec)
}

/// W^alpha: the word of dilation-modulation operators, last letter applied
/// first, fixed so that `W^alpha r` is the Walsh function with Paley index
/// of alpha.
pub fn affine_walsh_element(f: &PiecewisePoly, alpha: &MultiIndex) -> PiecewisePoly {
    let mut out = f.clone();
    for &bit in alpha.bits().iter().rev() {
        out = if bit == 0 { dilate(&out) } else { dilate_modulate(&out) };
    }
    out
}

/// The n-th dilation-translation of `f` restricted to [0,1):
/// n = 0 gives the constant 1, n = 2^k + j gives `2^{k/2} f(2^k t - j)`.
pub fn affine_element(f: &PiecewisePoly, n: u64) -> ScaledPoly {
    if n == 0 {
        return ScaledPoly::from_poly(PiecewisePoly::constant(Rational::one()));
    }
    let (k, j) = split_scale(n).expect("n >= 1");
    let level = f.level() + k;
    let count = 1u64 << level;
    let window = 1u64 << f.level();
    let scale = pow2(k as i64);
    let offset = -rat_int(j as i64);
    let width = f.degree() + 1;
    let pieces = (0..count)
        .map(|i| {
            let block = i >> f.level();
            if block == j {
                compose_affine(&f.pieces()[(i - j * window) as usize], &scale, &offset)
            } else {
                vec![Rational::zero(); width]
            }
        })
        .collect();
    ScaledPoly::new(PiecewisePoly::new(level, pieces).expect("level within cap"), k)
}

/// S^alpha: the Haar-side word, realized through the natural enumeration so
/// the function data stays rational.
pub fn affine_haar_element(f: &PiecewisePoly, alpha: &MultiIndex) -> ScaledPoly {
    affine_element(f, natural_index(alpha))
}

/// The integral-first spline variant: iterate `4 V W1` on the constant 1.
/// Modulating it once recovers the spline generator of the same order.
pub fn granados_generator(m: u32) -> Result<PiecewisePoly> {
    if m == 0 {
        return Err(Error::InvalidSplineOrder);
    }
    let mut poly = PiecewisePoly::constant(Rational::one());
    for _ in 0..m {
        let modulated = dilate_modulate(&poly);
        debug_assert!(modulated.mean().is_zero());
        poly = modulated.volterra().scale(&rat_int(4));
    }
    Ok(poly)
}

/// One element of the modulated-dilation system: the generator squeezed by
/// 2^{k+1} times the n-th Walsh function, for 2^k <= n < 2^{k+1}.
pub fn granados_element(m: u32, k: u32, n: u64) -> Result<PiecewisePoly> {
    if n < (1u64 << k) || n >= (1u64 << (k + 1)) {
        return Err(Error::IndexOutOfRange { n, lo: 1u64 << k, hi: 1u64 << (k + 1) });
    }
    let rho = granados_generator(m)?;
    let mut squeezed = rho;
    for _ in 0..=k {
        squeezed = dilate(&squeezed);
    }
    let walsh = walsh_fn(n, k + 1)?;
    Ok(squeezed.product(&walsh))
}
