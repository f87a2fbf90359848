//! Exact 1-periodic piecewise polynomials on dyadic partitions of [0,1).
//!
//! A function is stored as one polynomial per dyadic piece
//! `[i/2^level, (i+1)/2^level)`, with monomial coefficients in the global
//! variable `t`. Everything here is exact rational arithmetic: evaluation,
//! refinement, calculus, and inner products introduce no rounding at all.
//!
//! Values at breakpoints follow the right-continuity convention, so step
//! functions have well-defined pointwise values; measure-zero choices never
//! affect an integral.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{from_strings, Rational};

/// Hard cap on the dyadic level; 2^24 pieces is far beyond desk scale.
pub const MAX_LEVEL: u32 = 24;

#[derive(Clone, Debug)]
pub struct PiecewisePoly {
    level: u32,
    degree: usize,
    pieces: Vec<Vec<Rational>>,
}

fn all_zero(coeffs: &[Rational]) -> bool {
    coeffs.iter().all(Zero::is_zero)
}

fn horner(coeffs: &[Rational], t: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    out
}

/// Coefficients of p(a*t + b) given the coefficients of p.
pub(crate) fn compose_affine(coeffs: &[Rational], a: &Rational, b: &Rational) -> Vec<Rational> {
    let mut result: Vec<Rational> = Vec::with_capacity(coeffs.len());
    for c in coeffs.iter().rev() {
        // result <- result * (a t + b) + c
        let mut next = vec![Rational::zero(); result.len() + 1];
        for (k, r) in result.iter().enumerate() {
            next[k] += r * b;
            next[k + 1] += r * a;
        }
        if next.is_empty() {
            next.push(Rational::zero());
        }
        next[0] += c;
        result = next;
    }
    if result.is_empty() {
        result.push(Rational::zero());
    }
    result
}

/// Exact integral of `coeffs` over the dyadic piece `[i/2^level, (i+1)/2^level]`.
fn integral_over_piece(coeffs: &[Rational], i: u64, level: u32) -> Rational {
    let ibig = BigInt::from(i);
    let jbig = BigInt::from(i + 1);
    let mut pow_i = ibig.clone();
    let mut pow_j = jbig.clone();
    let mut scale = BigInt::one() << level;
    let mut total = Rational::zero();
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let diff = &pow_j - &pow_i;
            total += c * Rational::new(diff, BigInt::from(k as u64 + 1) * &scale);
        }
        pow_i *= &ibig;
        pow_j *= &jbig;
        scale <<= level;
    }
    total
}

impl PiecewisePoly {
    pub(crate) fn from_pieces(level: u32, mut pieces: Vec<Vec<Rational>>) -> Self {
        assert!(level <= MAX_LEVEL, "dyadic level {level} exceeds cap {MAX_LEVEL}");
        assert_eq!(pieces.len(), 1usize << level);
        let width = pieces.iter().map(Vec::len).max().unwrap_or(1).max(1);
        for p in &mut pieces {
            p.resize(width, Rational::zero());
        }
        Self { level, degree: width - 1, pieces }
    }

    pub fn new(level: u32, pieces: Vec<Vec<Rational>>) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::InvariantViolation(format!(
                "level {level} exceeds cap {MAX_LEVEL}"
            )));
        }
        if pieces.len() != 1usize << level {
            return Err(Error::InvariantViolation(format!(
                "expected {} pieces for level {level}, got {}",
                1usize << level,
                pieces.len()
            )));
        }
        Ok(Self::from_pieces(level, pieces))
    }

    pub fn constant(value: Rational) -> Self {
        Self::from_pieces(0, vec![vec![value]])
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn piece_count(&self) -> u64 {
        1u64 << self.level
    }

    pub(crate) fn pieces(&self) -> &[Vec<Rational>] {
        &self.pieces
    }

    pub(crate) fn piece_at(&self, i: u64, common_level: u32) -> &[Rational] {
        &self.pieces[(i >> (common_level - self.level)) as usize]
    }

    /// Exact integral of the function over `[i/2^level', (i+1)/2^level']`
    /// for a grid at least as fine as the function's own.
    pub(crate) fn integral_on_dyadic_piece(&self, i: u64, level: u32) -> Rational {
        debug_assert!(level >= self.level);
        let piece = self.piece_at(i, level);
        if all_zero(piece) {
            Rational::zero()
        } else {
            integral_over_piece(piece, i, level)
        }
    }

    /// Evaluates at `t` (reduced mod 1); right-continuous at breakpoints.
    pub fn eval(&self, t: &Rational) -> Rational {
        let t = t - t.floor();
        let count = self.piece_count();
        let idx = ((t.numer() * BigInt::from(count)) / t.denom())
            .to_u64()
            .expect("piece index fits u64")
            .min(count - 1);
        horner(&self.pieces[idx as usize], &t)
    }

    /// Same function on a finer dyadic grid; evaluation-invariant.
    pub fn refine(&self, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(Error::CoarseningUnsupported { current: self.level, requested: level });
        }
        if level > MAX_LEVEL {
            return Err(Error::InvariantViolation(format!(
                "level {level} exceeds cap {MAX_LEVEL}"
            )));
        }
        let shift = level - self.level;
        let pieces = (0..1u64 << level)
            .map(|i| self.pieces[(i >> shift) as usize].clone())
            .collect();
        Ok(Self::from_pieces(level, pieces))
    }

    /// Exact linear combination at the common refinement level.
    pub fn linear_combine(terms: &[(Rational, &PiecewisePoly)]) -> Self {
        if terms.is_empty() {
            return Self::zero();
        }
        let level = terms.iter().map(|(_, p)| p.level).max().unwrap();
        let width = terms.iter().map(|(_, p)| p.degree).max().unwrap() + 1;
        let count = 1u64 << level;
        let mut pieces = vec![vec![Rational::zero(); width]; count as usize];
        for (coeff, p) in terms {
            if coeff.is_zero() {
                continue;
            }
            for i in 0..count {
                let src = p.piece_at(i, level);
                let dst = &mut pieces[i as usize];
                for (k, c) in src.iter().enumerate() {
                    if !c.is_zero() {
                        dst[k] += coeff * c;
                    }
                }
            }
        }
        Self::from_pieces(level, pieces)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::linear_combine(&[(factor.clone(), self)])
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::linear_combine(&[(Rational::one(), self), (Rational::one(), other)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::linear_combine(&[(Rational::one(), self), (-Rational::one(), other)])
    }

    /// Antiderivative anchored at 0: continuous on [0,1], value 0 at t = 0.
    ///
    /// The result is a valid 1-periodic representation only when the input
    /// has zero mean; callers that need periodicity must check that first.
    pub fn volterra(&self) -> Self {
        let count = self.piece_count();
        let mut acc = Rational::zero();
        let mut pieces = Vec::with_capacity(count as usize);
        for i in 0..count {
            let src = &self.pieces[i as usize];
            let mut anti = vec![Rational::zero(); src.len() + 1];
            for (k, c) in src.iter().enumerate() {
                anti[k + 1] = c / Rational::from_integer(BigInt::from(k as u64 + 1));
            }
            let a = Rational::new(BigInt::from(i), BigInt::from(count));
            let b = Rational::new(BigInt::from(i + 1), BigInt::from(count));
            let at_a = horner(&anti, &a);
            let at_b = horner(&anti, &b);
            anti[0] = &acc - &at_a;
            acc += at_b - at_a;
            pieces.push(anti);
        }
        Self::from_pieces(self.level, pieces)
    }

    /// Piecewise derivative on open pieces.
    pub fn derivative(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|src| {
                if src.len() <= 1 {
                    vec![Rational::zero()]
                } else {
                    src.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(k, c)| c * Rational::from_integer(BigInt::from(k as u64)))
                        .collect()
                }
            })
            .collect();
        Self::from_pieces(self.level, pieces)
    }

    /// Exact integral over one period.
    pub fn mean(&self) -> Rational {
        let mut total = Rational::zero();
        for (i, piece) in self.pieces.iter().enumerate() {
            if !all_zero(piece) {
                total += integral_over_piece(piece, i as u64, self.level);
            }
        }
        total
    }

    /// First and last nonzero piece at the function's own level, half-open.
    pub fn support_range(&self) -> Option<(u64, u64)> {
        let first = self.pieces.iter().position(|p| !all_zero(p))?;
        let last = self.pieces.iter().rposition(|p| !all_zero(p)).unwrap();
        Some((first as u64, last as u64 + 1))
    }

    pub fn is_zero(&self) -> bool {
        self.support_range().is_none()
    }

    /// Exact L2(0,1) inner product via per-piece closed-form integration.
    ///
    /// Pieces where either factor vanishes identically are skipped, so
    /// functions with disjoint dyadic supports cost nothing to pair.
    pub fn inner_product(&self, other: &Self) -> Rational {
        let level = self.level.max(other.level);
        let (alo, ahi) = match self.support_range() {
            Some(r) => r,
            None => return Rational::zero(),
        };
        let (blo, bhi) = match other.support_range() {
            Some(r) => r,
            None => return Rational::zero(),
        };
        let lo = (alo << (level - self.level)).max(blo << (level - other.level));
        let hi = (ahi << (level - self.level)).min(bhi << (level - other.level));
        let mut total = Rational::zero();
        for i in lo..hi {
            let pa = self.piece_at(i, level);
            if all_zero(pa) {
                continue;
            }
            let pb = other.piece_at(i, level);
            if all_zero(pb) {
                continue;
            }
            total += integral_over_piece(&poly_mul(pa, pb), i, level);
        }
        total
    }

    /// Pointwise product; degrees add, levels merge.
    pub fn product(&self, other: &Self) -> Self {
        let level = self.level.max(other.level);
        let count = 1u64 << level;
        let width = self.degree + other.degree + 1;
        let mut pieces = Vec::with_capacity(count as usize);
        for i in 0..count {
            let pa = self.piece_at(i, level);
            let pb = other.piece_at(i, level);
            if all_zero(pa) || all_zero(pb) {
                pieces.push(vec![Rational::zero(); width]);
            } else {
                pieces.push(poly_mul(pa, pb));
            }
        }
        Self::from_pieces(level, pieces)
    }

    /// The rotated function t -> f(t + shift/2^level), with periodic wrap.
    pub fn rotate(&self, shift: u64) -> Self {
        let count = self.piece_count();
        let shift = shift % count;
        let offset = Rational::new(BigInt::from(shift), BigInt::from(count));
        let one = Rational::one();
        let pieces = (0..count)
            .map(|i| {
                let src = (i + shift) % count;
                let wrap = if i + shift >= count { &offset - &one } else { offset.clone() };
                compose_affine(&self.pieces[src as usize], &one, &wrap)
            })
            .collect();
        Self::from_pieces(self.level, pieces)
    }

    /// Function equality (piecewise data agree on the common refinement).
    pub fn equals(&self, other: &Self) -> bool {
        let level = self.level.max(other.level);
        let count = 1u64 << level;
        let width = self.degree.max(other.degree) + 1;
        let zero = Rational::zero();
        for i in 0..count {
            let pa = self.piece_at(i, level);
            let pb = other.piece_at(i, level);
            for k in 0..width {
                if pa.get(k).unwrap_or(&zero) != pb.get(k).unwrap_or(&zero) {
                    return false;
                }
            }
        }
        true
    }

    /// JSON codec: exact integers as decimal strings.
    pub fn to_json(&self) -> Value {
        let pieces: Vec<Value> = self
            .pieces
            .iter()
            .map(|p| {
                Value::Array(
                    p.iter()
                        .map(|c| json!([c.numer().to_string(), c.denom().to_string()]))
                        .collect(),
                )
            })
            .collect();
        json!({ "level": self.level, "degree": self.degree, "pieces": pieces })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let level = value
            .get("level")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing level".into()))? as u32;
        let degree = value
            .get("degree")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing degree".into()))? as usize;
        let pieces_json = value
            .get("pieces")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing pieces".into()))?;
        let mut pieces = Vec::with_capacity(pieces_json.len());
        for pj in pieces_json {
            let arr = pj.as_array().ok_or_else(|| Error::Parse("piece is not an array".into()))?;
            let mut coeffs = Vec::with_capacity(arr.len());
            for cj in arr {
                let pair = cj.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                    Error::Parse("coefficient must be a [numerator, denominator] pair".into())
                })?;
                let numer = pair[0].as_str().ok_or_else(|| Error::Parse("numerator".into()))?;
                let denom = pair[1].as_str().ok_or_else(|| Error::Parse("denominator".into()))?;
                coeffs.push(from_strings(numer, denom)?);
            }
            pieces.push(coeffs);
        }
        let poly = Self::new(level, pieces)?;
        if poly.degree != degree {
            return Err(Error::Parse(format!(
                "declared degree {degree} does not match coefficients ({})",
                poly.degree
            )));
        }
        Ok(poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn sawtooth() -> PiecewisePoly {
        // 1 - 2t on (0,1)
        PiecewisePoly::from_pieces(0, vec![vec![rat_int(1), rat_int(-2)]])
    }

    fn square_wave() -> PiecewisePoly {
        // sign of sin(2 pi t): +1 on [0,1/2), -1 on [1/2,1)
        PiecewisePoly::from_pieces(1, vec![vec![rat_int(1)], vec![rat_int(-1)]])
    }

    #[test]
    fn eval_basics() {
        let one = PiecewisePoly::constant(rat_int(1));
        assert_eq!(one.eval(&rat(7, 13)), rat_int(1));
        assert_eq!(sawtooth().eval(&rat(1, 4)), rat(1, 2));
        // periodic reduction and negative arguments
        assert_eq!(sawtooth().eval(&rat(5, 4)), rat(1, 2));
        assert_eq!(sawtooth().eval(&rat(-3, 4)), rat(1, 2));
    }

    #[test]
    fn eval_right_continuous_at_breakpoints() {
        let r = square_wave();
        assert_eq!(r.eval(&rat(0, 1)), rat_int(1));
        assert_eq!(r.eval(&rat(1, 2)), rat_int(-1));
        assert_eq!(r.eval(&rat(1, 1)), rat_int(1));
    }

    #[test]
    fn refine_is_evaluation_invariant() {
        let s = sawtooth();
        let fine = s.refine(5).unwrap();
        assert_eq!(fine.level(), 5);
        assert_eq!(fine.eval(&rat(3, 8)), rat(1, 4));
        assert_eq!(s.eval(&rat(3, 8)), rat(1, 4));
        assert!(fine.equals(&s));
        assert_eq!(fine.inner_product(&fine), s.inner_product(&s));
        assert_eq!(fine.mean(), s.mean());
    }

    #[test]
    fn refine_rejects_coarsening() {
        let r = square_wave();
        assert!(matches!(
            r.refine(0),
            Err(Error::CoarseningUnsupported { current: 1, requested: 0 })
        ));
    }

    #[test]
    fn linear_combine_identity_and_cancellation() {
        let r = square_wave();
        let same = PiecewisePoly::linear_combine(&[(rat_int(1), &r)]);
        assert!(same.equals(&r));
        let zero = PiecewisePoly::linear_combine(&[(rat_int(1), &r), (rat_int(-1), &r)]);
        assert!(zero.is_zero());
    }

    #[test]
    fn volterra_triangle() {
        let r = square_wave();
        let v = r.volterra();
        assert_eq!(v.eval(&rat(0, 1)), rat_int(0));
        assert_eq!(v.eval(&rat(1, 2)), rat(1, 2));
        assert_eq!(v.eval(&rat(3, 4)), rat(1, 4));
        assert!(v.volterra().derivative().equals(&v));
    }

    #[test]
    fn volterra_of_zero() {
        assert!(PiecewisePoly::zero().volterra().is_zero());
    }

    #[test]
    fn derivative_cases() {
        let s = sawtooth();
        assert!(s.derivative().equals(&PiecewisePoly::constant(rat_int(-2))));
        assert!(PiecewisePoly::constant(rat_int(5)).derivative().is_zero());
        // fundamental theorem on a nontrivial input
        let p = PiecewisePoly::from_pieces(
            1,
            vec![vec![rat(1, 3), rat_int(2), rat(-5, 7)], vec![rat_int(0), rat(9, 2), rat_int(1)]],
        );
        assert!(p.volterra().derivative().equals(&p));
    }

    #[test]
    fn mean_values() {
        assert_eq!(square_wave().mean(), rat_int(0));
        assert_eq!(PiecewisePoly::constant(rat_int(1)).mean(), rat_int(1));
        assert_eq!(sawtooth().mean(), rat_int(0));
    }

    #[test]
    fn inner_products() {
        let r = square_wave();
        assert_eq!(r.inner_product(&r), rat_int(1));
        let s = sawtooth();
        assert_eq!(s.inner_product(&s), rat(1, 3));
        assert_eq!(r.inner_product(&s), rat(1, 2));
    }

    #[test]
    fn inner_product_bilinear() {
        let r = square_wave();
        let s = sawtooth();
        let combo =
            PiecewisePoly::linear_combine(&[(rat(2, 3), &r), (rat(-5, 4), &s)]);
        let lhs = combo.inner_product(&s);
        let rhs = rat(2, 3) * r.inner_product(&s) + rat(-5, 4) * s.inner_product(&s);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_of_square_wave_with_itself() {
        let r = square_wave();
        assert!(r.product(&r).equals(&PiecewisePoly::constant(rat_int(1))));
    }

    #[test]
    fn rotate_by_half_negates_square_wave() {
        let r = square_wave();
        assert!(r.rotate(1).equals(&r.neg()));
        let s = sawtooth().refine(1).unwrap();
        // sawtooth(t + 1/2) on [0,1/2) is -2t, i.e. 1 - 2(t + 1/2)
        let rotated = s.rotate(1);
        assert_eq!(rotated.eval(&rat(1, 8)), rat(-1, 4));
        assert_eq!(rotated.eval(&rat(5, 8)), rat(3, 4));
    }

    #[test]
    fn support_and_zero_detection() {
        let mut pieces = vec![vec![rat_int(0)]; 8];
        pieces[3] = vec![rat_int(2)];
        pieces[4] = vec![rat_int(1)];
        let p = PiecewisePoly::from_pieces(3, pieces);
        assert_eq!(p.support_range(), Some((3, 5)));
        assert!(!p.is_zero());
        assert!(PiecewisePoly::zero().is_zero());
    }

    #[test]
    fn disjoint_supports_give_zero_inner_product() {
        let mut a = vec![vec![rat_int(0), rat_int(0)]; 4];
        a[0] = vec![rat_int(1), rat(3, 2)];
        let mut b = vec![vec![rat_int(0)]; 4];
        b[2] = vec![rat_int(5)];
        let pa = PiecewisePoly::from_pieces(2, a);
        let pb = PiecewisePoly::from_pieces(2, b);
        assert_eq!(pa.inner_product(&pb), rat_int(0));
    }

    #[test]
    fn json_round_trip() {
        let p = PiecewisePoly::from_pieces(
            1,
            vec![vec![rat(1, 3), rat_int(-2)], vec![rat_int(4), rat(7, 5)]],
        );
        let v = p.to_json();
        let q = PiecewisePoly::from_json(&v).unwrap();
        assert!(p.equals(&q));
        assert_eq!(q.level(), 1);
        assert_eq!(q.degree(), 1);
    }

    #[test]
    fn json_rejects_malformed() {
        assert!(PiecewisePoly::from_json(&serde_json::json!({"level": 0})).is_err());
        let bad = serde_json::json!({"level": 0, "degree": 0, "pieces": [[["1", "-2"]]]});
        assert!(PiecewisePoly::from_json(&bad).is_err());
    }

    #[test]
    fn compose_affine_substitution() {
        // p(t) = t^2 + 1, p(2t - 1) = 4t^2 - 4t + 2
        let coeffs = vec![rat_int(1), rat_int(0), rat_int(1)];
        let composed = compose_affine(&coeffs, &rat_int(2), &rat_int(-1));
        assert_eq!(composed, vec![rat_int(2), rat_int(-4), rat_int(4)]);
    }
}
