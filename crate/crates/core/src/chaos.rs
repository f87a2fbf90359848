//! Walsh-coefficient analysis of the spline generators.
//!
//! The m-th generator splits as the square wave minus components of odd
//! chaos order 3, 5, ..., 2m+1; each component is recovered here as a slice
//! of the exact Walsh coefficient table. The table is computed in one shot
//! by a fast Walsh transform over exact piece integrals, so truncation is
//! the only approximation and it is tracked by an exact residual.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::{chaos_order, split_scale, walsh_fn, MultiIndex};
use crate::operators::{affine_haar_element, affine_walsh_element, build_spline};
use crate::poly::PiecewisePoly;
use crate::quadratic::QuadraticNumber;
use crate::rational::{pow2, rat, Rational};
use crate::scaled::ScaledPoly;

/// Exact Walsh coefficient (f, w_n), Paley enumeration, n >= 1.
pub fn walsh_coeff(f: &PiecewisePoly, n: u64) -> Result<Rational> {
    let (k, _) = split_scale(n)?;
    let level = (k + 1).max(f.level());
    Ok(f.inner_product(&walsh_fn(n, level)?))
}

fn bit_reverse(n: u64, bits: u32) -> u64 {
    n.reverse_bits() >> (64 - bits)
}

/// In-place transform with kernel (-1)^{popcount(a & b)}.
fn fast_walsh_transform(values: &mut [Rational]) {
    let n = values.len();
    let mut h = 1;
    while h < n {
        let mut block = 0;
        while block < n {
            for i in block..block + h {
                let x = values[i].clone();
                let y = values[i + h].clone();
                values[i] = &x + &y;
                values[i + h] = x - y;
            }
            block += 2 * h;
        }
        h *= 2;
    }
}

/// All exact Walsh coefficients (f, w_n) for Paley indices n = 0..2^L-1,
/// where L is the coarsest level resolving `max_index`.
///
/// One fast transform over exact piece integrals replaces one integration
/// per index; a test pins this against the direct inner products.
pub fn walsh_coeffs_batch(f: &PiecewisePoly, max_index: u64) -> Result<Vec<Rational>> {
    let (k, _) = split_scale(max_index)?;
    let level = (k + 1).max(f.level()).max(1);
    let count = 1u64 << level;
    let mut values: Vec<Rational> = (0..count)
        .into_par_iter()
        .map(|i| f.integral_on_dyadic_piece(i, level))
        .collect();
    fast_walsh_transform(&mut values);
    Ok((0..count).map(|n| values[bit_reverse(n, level) as usize].clone()).collect())
}

/// Third-order drift coefficient of the spline chaos expansion:
/// `2/9 (1 - 4^{-(m-1)})`, the m-th iterate of x -> (x + 2/3)/4 from 0.
pub fn gamma(m: u32) -> Rational {
    assert!(m >= 1, "defined for m >= 1");
    rat(2, 9) * (Rational::one() - pow2(-2 * (m as i64 - 1)))
}

/// Walsh coefficient table of a spline generator grouped by chaos order.
#[derive(Clone, Debug)]
pub struct ChaosDecomposition {
    m: u32,
    max_index: u64,
    coeffs: BTreeMap<u64, Rational>,
    by_order: BTreeMap<u32, BTreeMap<u64, Rational>>,
    partial_sq_norms: BTreeMap<u32, Rational>,
    norm_sq: Rational,
    residual: Rational,
}

impl ChaosDecomposition {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn max_index(&self) -> u64 {
        self.max_index
    }

    /// Nonzero coefficients, Paley-indexed.
    pub fn coeffs(&self) -> &BTreeMap<u64, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, n: u64) -> Rational {
        self.coeffs.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn orders(&self) -> Vec<u32> {
        self.by_order.keys().copied().collect()
    }

    pub fn order_slice(&self, order: u32) -> Option<&BTreeMap<u64, Rational>> {
        self.by_order.get(&order)
    }

    /// Exact sum of squared coefficients of the given chaos order.
    pub fn partial_sq_norm(&self, order: u32) -> Rational {
        self.partial_sq_norms.get(&order).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn partial_sq_norms(&self) -> &BTreeMap<u32, Rational> {
        &self.partial_sq_norms
    }

    /// Exact squared norm of the generator.
    pub fn norm_sq(&self) -> &Rational {
        &self.norm_sq
    }

    /// Exact truncation defect: norm_sq minus all tabulated squares.
    pub fn residual(&self) -> &Rational {
        &self.residual
    }

    /// Checks the closed form of the third-order slice: coefficient
    /// -(gamma_m + 1/2) at index 7, -2^{-(k+1)} at 3 + 2^{k+2} for k >= 1,
    /// nothing else of order 3. Exact comparisons throughout.
    pub fn order3_matches_closed_form(&self) -> bool {
        let g = gamma(self.m);
        let mut expected: BTreeMap<u64, Rational> = BTreeMap::new();
        expected.insert(7, -(&g + rat(1, 2)));
        let mut k = 1i64;
        loop {
            let n = 3 + (1u64 << (k + 2));
            if n > self.max_index {
                break;
            }
            expected.insert(n, -pow2(-(k + 1)));
            k += 1;
        }
        self.by_order.get(&3).map(|slice| slice == &expected).unwrap_or(false)
    }

    /// Multi-indices of the nonzero coefficients in one chaos-order slice.
    pub fn slice_spectrum(&self, order: u32) -> Vec<MultiIndex> {
        self.by_order
            .get(&order)
            .map(|slice| {
                slice.keys().map(|&n| crate::index::paley_multiindex(n).unwrap()).collect()
            })
            .unwrap_or_default()
    }
}

/// Expands the m-th spline generator over the Walsh system up to `max_index`
/// and groups the exact coefficients by chaos order.
///
/// Fails if any coefficient violates the structural constraints (only the
/// square wave itself at order 1; otherwise odd orders 3..2m+1), so the
/// grouping is a falsifiable check rather than an assumption.
pub fn decompose(m: u32, max_index: u64) -> Result<ChaosDecomposition> {
    if m == 0 {
        return Err(Error::InvalidSplineOrder);
    }
    if max_index < 7 {
        return Err(Error::IndexOutOfRange { n: max_index, lo: 7, hi: u64::MAX });
    }
    let spline = build_spline(m)?;
    let poly = spline.poly();
    let norm_sq = poly.inner_product(poly);
    let table = walsh_coeffs_batch(poly, max_index)?;
    if !table[0].is_zero() {
        return Err(Error::InvariantViolation("generator has a constant component".into()));
    }

    let mut coeffs = BTreeMap::new();
    let mut by_order: BTreeMap<u32, BTreeMap<u64, Rational>> = BTreeMap::new();
    let mut partial: BTreeMap<u32, Rational> = BTreeMap::new();
    let mut sum_sq = Rational::zero();
    for n in 1..=max_index {
        let c = &table[n as usize];
        if c.is_zero() {
            continue;
        }
        let order = chaos_order(n)?;
        let structural_ok =
            if n == 1 { order == 1 } else { order % 2 == 1 && order >= 3 && order <= 2 * m + 1 };
        if !structural_ok {
            return Err(Error::InvariantViolation(format!(
                "nonzero coefficient {c} at index {n} has forbidden chaos order {order}"
            )));
        }
        sum_sq += c * c;
        coeffs.insert(n, c.clone());
        by_order.entry(order).or_default().insert(n, c.clone());
        *partial.entry(order).or_insert_with(Rational::zero) += c * c;
    }
    if coeffs.get(&1) != Some(&Rational::one()) {
        return Err(Error::InvariantViolation("square-wave coefficient is not 1".into()));
    }
    let residual = &norm_sq - &sum_sq;
    if residual.is_negative() {
        return Err(Error::InvariantViolation("negative truncation residual".into()));
    }
    Ok(ChaosDecomposition { m, max_index, coeffs, by_order, partial_sq_norms: partial, norm_sq, residual })
}

/// True iff no element of the set is a proper suffix of another; for spectra
/// this is exactly the unique-factorization property of concatenations.
pub fn is_simple_spectrum(spectrum: &[MultiIndex]) -> bool {
    for beta in spectrum {
        for other in spectrum {
            if beta.is_proper_suffix_of(other) {
                return false;
            }
        }
    }
    true
}

/// Projection of `f` onto the span of the Walsh functions with index 1..=N.
pub fn truncate_to_walsh_index(f: &PiecewisePoly, max_index: u64) -> Result<PiecewisePoly> {
    let table = walsh_coeffs_batch(f, max_index)?;
    let (k, _) = split_scale(max_index)?;
    let level = (k + 1).max(f.level()).max(1);
    let mut terms: Vec<(Rational, PiecewisePoly)> = Vec::new();
    for n in 1..=max_index {
        let c = &table[n as usize];
        if !c.is_zero() {
            terms.push((c.clone(), walsh_fn(n, level)?));
        }
    }
    let refs: Vec<(Rational, &PiecewisePoly)> =
        terms.iter().map(|(c, p)| (c.clone(), p)).collect();
    Ok(PiecewisePoly::linear_combine(&refs))
}

/// Dictionary-compressed view of a piecewise constant function: tiny value
/// alphabet plus one code per piece. Keeps the pairwise integration of large
/// step systems at integer-counting cost.
struct StepCodes {
    level: u32,
    alphabet: Vec<Rational>,
    codes: Vec<u16>,
}

fn compress_step(p: &PiecewisePoly) -> Option<StepCodes> {
    if p.degree() != 0 {
        return None;
    }
    let mut alphabet: Vec<Rational> = Vec::new();
    let mut codes = Vec::with_capacity(p.pieces().len());
    for piece in p.pieces() {
        let value = &piece[0];
        let code = match alphabet.iter().position(|a| a == value) {
            Some(i) => i,
            None => {
                if alphabet.len() >= 512 {
                    return None;
                }
                alphabet.push(value.clone());
                alphabet.len() - 1
            }
        };
        codes.push(code as u16);
    }
    Some(StepCodes { level: p.level(), alphabet, codes })
}

fn step_inner_product(a: &StepCodes, b: &StepCodes) -> Rational {
    let level = a.level.max(b.level);
    let count = 1u64 << level;
    let width = b.alphabet.len();
    let mut counts = vec![0u64; a.alphabet.len() * width];
    let sa = level - a.level;
    let sb = level - b.level;
    for i in 0..count {
        let ca = a.codes[(i >> sa) as usize] as usize;
        let cb = b.codes[(i >> sb) as usize] as usize;
        counts[ca * width + cb] += 1;
    }
    let mut total = Rational::zero();
    for (idx, &cnt) in counts.iter().enumerate() {
        if cnt == 0 {
            continue;
        }
        let va = &a.alphabet[idx / width];
        let vb = &b.alphabet[idx % width];
        if va.is_zero() || vb.is_zero() {
            continue;
        }
        total += va * vb * Rational::from_integer(BigInt::from(cnt));
    }
    total * pow2(-(level as i64))
}

/// Exact pairwise Gram data of the affine Walsh and affine Haar systems
/// generated by `f`, up to composition depth `depth`.
#[derive(Clone, Debug)]
pub struct OrthogonalityReport {
    pub depth: u32,
    /// Exact squared norm of the generator (the required diagonal value).
    pub norm_sq: Rational,
    pub walsh_offdiag_all_zero: bool,
    pub haar_offdiag_all_zero: bool,
    pub walsh_diagonals_match: bool,
    pub haar_diagonals_match: bool,
    /// Largest off-diagonal magnitude over both systems (0 when orthogonal).
    pub max_offdiag_abs: f64,
}

impl OrthogonalityReport {
    pub fn fully_orthogonal(&self) -> bool {
        self.walsh_offdiag_all_zero
            && self.haar_offdiag_all_zero
            && self.walsh_diagonals_match
            && self.haar_diagonals_match
    }
}

/// Computes every pairwise inner product of the two affine systems of `f`
/// for composition words up to length `depth`, exactly.
pub fn orthogonality_report(f: &PiecewisePoly, depth: u32) -> Result<OrthogonalityReport> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if !f.mean().is_zero() {
        return Err(Error::NonzeroMean);
    }
    let alphas: Vec<MultiIndex> = (0..=depth).flat_map(MultiIndex::all_of_length).collect();
    let norm_sq = f.inner_product(f);

    let mut walsh_offdiag_all_zero = true;
    let mut walsh_diagonals_match = true;
    let mut haar_offdiag_all_zero = true;
    let mut haar_diagonals_match = true;
    let mut max_offdiag: f64 = 0.0;

    let walsh_elems: Vec<PiecewisePoly> =
        alphas.par_iter().map(|a| affine_walsh_element(f, a)).collect();
    let walsh_codes: Vec<Option<StepCodes>> = walsh_elems.iter().map(compress_step).collect();
    for i in 0..walsh_elems.len() {
        for j in i..walsh_elems.len() {
            let ip = match (&walsh_codes[i], &walsh_codes[j]) {
                (Some(a), Some(b)) => step_inner_product(a, b),
                _ => walsh_elems[i].inner_product(&walsh_elems[j]),
            };
            if i == j {
                if ip != norm_sq {
                    walsh_diagonals_match = false;
                }
            } else if !ip.is_zero() {
                walsh_offdiag_all_zero = false;
                max_offdiag = max_offdiag.max(crate::rational::to_f64(&ip).abs());
            }
        }
    }

    let haar_elems: Vec<ScaledPoly> =
        alphas.par_iter().map(|a| affine_haar_element(f, a)).collect();
    let haar_codes: Vec<Option<StepCodes>> =
        haar_elems.iter().map(|e| compress_step(e.poly())).collect();
    for i in 0..haar_elems.len() {
        for j in i..haar_elems.len() {
            let raw = match (&haar_codes[i], &haar_codes[j]) {
                (Some(a), Some(b)) => step_inner_product(a, b),
                _ => haar_elems[i].poly().inner_product(haar_elems[j].poly()),
            };
            let exponent = haar_elems[i].sqrt2_exponent() + haar_elems[j].sqrt2_exponent();
            let ip = if raw.is_zero() {
                QuadraticNumber::zero()
            } else {
                &QuadraticNumber::sqrt2_power(exponent) * &QuadraticNumber::from_rational(raw)
            };
            if i == j {
                if ip != QuadraticNumber::from_rational(norm_sq.clone()) {
                    haar_diagonals_match = false;
                }
            } else if !ip.is_zero() {
                haar_offdiag_all_zero = false;
                max_offdiag = max_offdiag.max(ip.to_f64().abs());
            }
        }
    }

    Ok(OrthogonalityReport {
        depth,
        norm_sq,
        walsh_offdiag_all_zero,
        haar_offdiag_all_zero,
        walsh_diagonals_match,
        haar_diagonals_match,
        max_offdiag_abs: max_offdiag,
    })
}
