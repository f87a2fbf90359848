//! Finite-section certification of the universal Riesz bounds.
//!
//! The infinite systems have Riesz bounds 1/10 and 19/10; every principal
//! finite section of their Gram quadratic form must therefore keep its
//! spectrum inside [1/100, 361/100], and the sections of the Haar-deviation
//! form must stay below (9/10)^2. Those finite-dimensional consequences are
//! what this module certifies: Gram entries are exact in Q[sqrt(2)], floats
//! appear only inside the eigensolver, and the achieved residual is part of
//! every certificate.

use rayon::prelude::*;

use crate::chaos::{decompose, gamma, ChaosDecomposition};
use crate::error::{Error, Result};
use crate::index::haar_fn;
use crate::jacobi::symmetric_eigenvalues;
use crate::operators::{affine_element, build_spline};
use crate::poly::PiecewisePoly;
use crate::quadratic::QuadraticNumber;
use crate::rational::{rat, to_f64, Rational};
use crate::scaled::ScaledPoly;

/// Lower edge for section eigenvalues: (1/10)^2.
pub const SECTION_LAMBDA_MIN: f64 = 0.01;
/// Upper edge for section eigenvalues: (19/10)^2.
pub const SECTION_LAMBDA_MAX: f64 = 3.61;
/// Bound for the deviation-operator sections.
pub const DEVIATION_BOUND: f64 = 0.9;
/// Absolute slack granted to the deviation comparison (float boundary only).
pub const DEVIATION_SLACK: f64 = 1e-9;
/// Bound for the total component-norm sum.
pub const NORM_SUM_BOUND: f64 = 0.9;
/// Bound for the component-norm sum over orders five and higher.
pub const TAIL_BOUND: f64 = 0.12;
/// Sweep cap for the eigensolver.
pub const MAX_SWEEPS: usize = 100;

/// Exact symmetric Gram matrix of a function system, indexed as given.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    size: usize,
    /// Upper triangle, row-major: entry (i,j) for i <= j at tri(i,j).
    entries: Vec<QuadraticNumber>,
}

fn tri(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * n - i * (i + 1) / 2 + j
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadraticNumber {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        &self.entries[tri(a, b, self.size)]
    }

    /// Exact identity check.
    pub fn is_identity(&self) -> bool {
        let one = QuadraticNumber::from_rational(Rational::from_integer(1.into()));
        for i in 0..self.size {
            for j in i..self.size {
                let expect_one = i == j;
                let entry = self.get(i, j);
                if expect_one != (*entry == one) || (!expect_one && !entry.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Float image for the eigensolver; each entry is pure rational or a pure
    /// sqrt(2) multiple, so conversion error stays below 2^-50 relative.
    pub fn to_float(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.size]; self.size];
        for i in 0..self.size {
            for j in i..self.size {
                let v = self.get(i, j).to_f64();
                out[i][j] = v;
                out[j][i] = v;
            }
        }
        out
    }
}

/// Exact pairwise inner products of the system, in parallel over pairs.
/// Pairs with disjoint dyadic supports are skipped outright.
pub fn gram(system: &[ScaledPoly]) -> Result<GramMatrix> {
    if system.is_empty() {
        return Err(Error::EmptySystem);
    }
    let n = system.len();
    let common = system.iter().map(|f| f.poly().level()).max().unwrap();
    let supports: Vec<Option<(u64, u64)>> = system
        .iter()
        .map(|f| {
            f.poly()
                .support_range()
                .map(|(lo, hi)| (lo << (common - f.poly().level()), hi << (common - f.poly().level())))
        })
        .collect();

    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let entries: Vec<QuadraticNumber> = pairs
        .par_iter()
        .map(|&(i, j)| match (&supports[i], &supports[j]) {
            (Some((alo, ahi)), Some((blo, bhi))) if alo.max(blo) < ahi.min(bhi) => {
                system[i].inner_product(&system[j])
            }
            _ => QuadraticNumber::zero(),
        })
        .collect();
    Ok(GramMatrix { size: n, entries })
}

/// The first `count` elements of the classical Haar system (index 0 is the
/// constant 1).
pub fn haar_system(count: u64) -> Result<Vec<ScaledPoly>> {
    if count == 0 {
        return Err(Error::EmptySystem);
    }
    let mut out = Vec::with_capacity(count as usize);
    out.push(ScaledPoly::from_poly(PiecewisePoly::constant(Rational::from_integer(1.into()))));
    for n in 1..count {
        out.push(haar_fn(n)?);
    }
    Ok(out)
}

/// The first `count` elements of the m-th spline affine system.
pub fn spline_system(m: u32, count: u64) -> Result<Vec<ScaledPoly>> {
    if count == 0 {
        return Err(Error::EmptySystem);
    }
    let spline = build_spline(m)?;
    Ok((0..count).map(|n| affine_element(spline.poly(), n)).collect())
}

/// Differences between the Haar and spline affine elements for 1 <= n < count;
/// the n = 0 terms coincide and are excluded.
pub fn deviation_system(m: u32, count: u64) -> Result<Vec<ScaledPoly>> {
    if count < 2 {
        return Err(Error::EmptySystem);
    }
    let spline = build_spline(m)?;
    (1..count)
        .map(|n| {
            let haar = haar_fn(n)?;
            let elem = affine_element(spline.poly(), n);
            debug_assert_eq!(haar.sqrt2_exponent(), elem.sqrt2_exponent());
            let diff = haar.poly().sub(elem.poly());
            Ok(ScaledPoly::new(diff, haar.sqrt2_exponent()))
        })
        .collect()
}

/// Extreme eigenvalues of an exact Gram matrix plus the achieved residual.
pub fn extreme_eigenvalues(g: &GramMatrix, tol: f64) -> Result<(f64, f64, f64)> {
    let (vals, residual) = symmetric_eigenvalues(g.to_float(), tol, MAX_SWEEPS)?;
    Ok((vals[0], vals[vals.len() - 1], residual))
}

/// Finite-section spectral estimate for one affine system.
#[derive(Clone, Debug)]
pub struct SectionBounds {
    pub m: u32,
    pub depth: u32,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Inner estimate of the lower Riesz bound: sqrt(lambda_min).
    pub a_est: f64,
    /// Inner estimate of the upper Riesz bound: sqrt(lambda_max).
    pub b_est: f64,
    pub eig_residual: f64,
}

impl SectionBounds {
    /// The testable finite-dimensional claim: the whole section spectrum
    /// lies inside [1/100, 361/100].
    pub fn contained(&self) -> bool {
        self.lambda_min >= SECTION_LAMBDA_MIN && self.lambda_max <= SECTION_LAMBDA_MAX
    }
}

/// Gram section of size 2^depth for the m-th spline system (m = 0 selects
/// the Haar system as an exactness cross-check).
pub fn section_bounds(m: u32, depth: u32, tol: f64) -> Result<SectionBounds> {
    if depth == 0 {
        return Err(Error::EmptySystem);
    }
    let count = 1u64 << depth;
    let system = if m == 0 { haar_system(count)? } else { spline_system(m, count)? };
    let g = gram(&system)?;
    let (lambda_min, lambda_max, eig_residual) = extreme_eigenvalues(&g, tol)?;
    Ok(SectionBounds {
        m,
        depth,
        lambda_min,
        lambda_max,
        a_est: lambda_min.max(0.0).sqrt(),
        b_est: lambda_max.max(0.0).sqrt(),
        eig_residual,
    })
}

/// Largest singular value of the deviation section: sqrt of the top
/// eigenvalue of the exact Gram of the Haar-minus-spline differences.
/// Finite sections estimate the true deviation norm from below.
pub fn deviation_norm(m: u32, depth: u32, tol: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidSplineOrder);
    }
    if depth == 0 {
        return Err(Error::EmptySystem);
    }
    let system = deviation_system(m, 1u64 << depth)?;
    let g = gram(&system)?;
    let (_, lambda_max, _) = extreme_eigenvalues(&g, tol)?;
    Ok(lambda_max.max(0.0).sqrt())
}

/// Interval certificate for the sum of chaos-component norms.
///
/// Per order d = 2s+1 the squared norm is bracketed by the tabulated partial
/// sum below and by that sum plus the whole truncation residual above; the
/// brackets keep the certificate honest about the infinite spectra.
#[derive(Clone, Debug)]
pub struct NormSumCertificate {
    pub m: u32,
    pub max_index: u64,
    /// (chaos order, lower, upper) for each component.
    pub per_order: Vec<(u32, f64, f64)>,
    /// Interval for the total component-norm sum.
    pub total: (f64, f64),
    /// Interval for the partial sum over orders >= 5.
    pub tail: (f64, f64),
    /// Exact squared norm of the order-3 component: (gamma_m + 1/2)^2 + 1/12.
    pub order3_norm_sq: Rational,
    /// Whether the exact order-3 value sits inside its tabulated bracket.
    pub order3_bracket_consistent: bool,
    /// Exact comparison order3_norm_sq < 49/81.
    pub order3_below_bound: bool,
}

impl NormSumCertificate {
    pub fn passes(&self) -> bool {
        self.total.1 < NORM_SUM_BOUND
            && self.tail.1 < TAIL_BOUND
            && self.order3_bracket_consistent
            && self.order3_below_bound
    }
}

/// Builds the norm-sum certificate from an existing decomposition.
pub fn norm_sum_from_decomposition(decomp: &ChaosDecomposition) -> NormSumCertificate {
    let m = decomp.m();
    let residual = decomp.residual().clone();
    let mut per_order = Vec::new();
    let mut total = (0.0f64, 0.0f64);
    let mut tail = (0.0f64, 0.0f64);
    for s in 1..=m {
        let order = 2 * s + 1;
        let partial = decomp.partial_sq_norm(order);
        let lower = to_f64(&partial).max(0.0).sqrt();
        let upper = to_f64(&(&partial + &residual)).max(0.0).sqrt();
        per_order.push((order, lower, upper));
        total.0 += lower;
        total.1 += upper;
        if order >= 5 {
            tail.0 += lower;
            tail.1 += upper;
        }
    }
    let g = gamma(m);
    let half = rat(1, 2);
    let order3_norm_sq = (&g + &half) * (&g + &half) + rat(1, 12);
    let p3 = decomp.partial_sq_norm(3);
    let order3_bracket_consistent =
        p3 <= order3_norm_sq && order3_norm_sq <= &p3 + &residual;
    let order3_below_bound = order3_norm_sq < rat(49, 81);
    NormSumCertificate {
        m,
        max_index: decomp.max_index(),
        per_order,
        total,
        tail,
        order3_norm_sq,
        order3_bracket_consistent,
        order3_below_bound,
    }
}

/// Decomposes the m-th generator and certifies the component norm sums.
pub fn norm_sum_certificate(m: u32, max_index: u64) -> Result<NormSumCertificate> {
    Ok(norm_sum_from_decomposition(&decompose(m, max_index)?))
}

/// Aggregated quantitative data of one full certification run.
#[derive(Clone, Debug)]
pub struct BoundsCertificate {
    pub m: u32,
    pub depth: u32,
    pub max_index: u64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub a_est: f64,
    pub b_est: f64,
    pub eig_residual: f64,
    pub deviation_norm: f64,
    pub norm_sum: (f64, f64),
}

/// One full certification run with per-check verdicts.
#[derive(Clone, Debug)]
pub struct FullReport {
    pub certificate: BoundsCertificate,
    /// The generator was built and its defining equations verified exactly.
    pub spline_ok: bool,
    /// The order-3 slice matches its closed form exactly.
    pub order3_ok: bool,
    /// Section spectrum inside [1/100, 361/100].
    pub containment_ok: bool,
    /// Deviation section norm within 9/10 (plus float slack).
    pub deviation_ok: bool,
    /// Norm-sum upper bound below 9/10.
    pub norm_sum_ok: bool,
    /// Orders >= 5 contribute less than 0.12.
    pub tail_ok: bool,
}

impl FullReport {
    pub fn all_pass(&self) -> bool {
        self.spline_ok
            && self.order3_ok
            && self.containment_ok
            && self.deviation_ok
            && self.norm_sum_ok
            && self.tail_ok
    }

    pub fn checks(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("spline", self.spline_ok),
            ("order3", self.order3_ok),
            ("sections", self.containment_ok),
            ("deviation", self.deviation_ok),
            ("norm_sum", self.norm_sum_ok),
            ("tail", self.tail_ok),
        ]
    }
}

/// Runs every certificate for one order: exact spline verification, chaos
/// decomposition with the order-3 closed form, section spectra, deviation
/// sections, and the norm-sum intervals. Sub-failures become flags; hard
/// errors (non-convergence, structural violations) propagate.
pub fn full_report(m: u32, depth: u32, max_index: u64, tol: f64) -> Result<FullReport> {
    if m == 0 {
        return Err(Error::InvalidSplineOrder);
    }
    let spline_ok = build_spline(m).is_ok();
    let decomp = decompose(m, max_index)?;
    let order3_ok = decomp.order3_matches_closed_form();
    let norm_sum = norm_sum_from_decomposition(&decomp);
    let section = section_bounds(m, depth, tol)?;
    let deviation = deviation_norm(m, depth, tol)?;

    let certificate = BoundsCertificate {
        m,
        depth,
        max_index,
        lambda_min: section.lambda_min,
        lambda_max: section.lambda_max,
        a_est: section.a_est,
        b_est: section.b_est,
        eig_residual: section.eig_residual,
        deviation_norm: deviation,
        norm_sum: norm_sum.total,
    };
    Ok(FullReport {
        certificate,
        spline_ok,
        order3_ok,
        containment_ok: section.contained(),
        deviation_ok: deviation <= DEVIATION_BOUND + DEVIATION_SLACK,
        norm_sum_ok: norm_sum.total.1 < NORM_SUM_BOUND
            && norm_sum.order3_bracket_consistent
            && norm_sum.order3_below_bound,
        tail_ok: norm_sum.tail.1 < TAIL_BOUND,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn haar_gram_is_identity() {
        let system = haar_system(64).unwrap();
        let g = gram(&system).unwrap();
        assert!(g.is_identity());
    }

    #[test]
    fn haar_sections_have_unit_spectrum() {
        for depth in 1..=4u32 {
            let b = section_bounds(0, depth, 1e-12).unwrap();
            assert_eq!(b.lambda_min, 1.0, "depth {depth}");
            assert_eq!(b.lambda_max, 1.0, "depth {depth}");
            assert_eq!(b.eig_residual, 0.0);
        }
    }

    #[test]
    fn spline_gram_diagonal_and_disjoint_entries() {
        let system = spline_system(1, 16).unwrap();
        let g = gram(&system).unwrap();
        let norm = QuadraticNumber::from_rational(rat(4, 3));
        for n in 1..16 {
            assert_eq!(g.get(n, n), &norm, "diagonal {n}");
        }
        assert_eq!(g.get(0, 0), &QuadraticNumber::from_rational(rat_int(1)));
        // elements 2 and 3 live on the two halves: disjoint supports
        assert!(g.get(2, 3).is_zero());
        // the constant pairs to zero with every element (zero mean)
        for n in 1..16 {
            assert!(g.get(0, n).is_zero(), "constant row {n}");
        }
    }

    #[test]
    fn gram_entry_parity_matches_scale() {
        // mixed dyadic scales produce pure sqrt(2) entries, equal scales pure
        // rational ones
        let system = spline_system(1, 8).unwrap();
        let g = gram(&system).unwrap();
        let e12 = g.get(1, 2);
        assert!(e12.is_zero() || !e12.is_rational());
        let e23 = g.get(2, 3);
        assert!(e23.is_rational() || e23.sqrt2_part().cmp(&Rational::from_integer(0.into())) == std::cmp::Ordering::Equal);
    }

    #[test]
    fn sections_stay_inside_the_universal_window() {
        for m in 1..=2u32 {
            let b = section_bounds(m, 4, 1e-12).unwrap();
            assert!(b.contained(), "m={m}: [{}, {}]", b.lambda_min, b.lambda_max);
            assert!(b.eig_residual < 1e-12);
            assert!(b.a_est >= 0.1 && b.b_est <= 1.9);
        }
    }

    #[test]
    fn section_intervals_nest_with_depth() {
        let mut last = (f64::INFINITY, f64::NEG_INFINITY);
        for depth in 1..=5u32 {
            let b = section_bounds(1, depth, 1e-12).unwrap();
            assert!(b.lambda_min <= last.0 + 1e-9);
            assert!(b.lambda_max >= last.1 - 1e-9);
            last = (b.lambda_min, b.lambda_max);
        }
    }

    #[test]
    fn deviation_sections_grow_and_stay_bounded() {
        let mut last = 0.0f64;
        for depth in 1..=5u32 {
            let d = deviation_norm(1, depth, 1e-12).unwrap();
            assert!(d >= last - 1e-9, "depth {depth}");
            assert!(d <= DEVIATION_BOUND + DEVIATION_SLACK);
            last = d;
        }
    }

    #[test]
    fn norm_sum_first_order() {
        let c = norm_sum_certificate(1, 4096).unwrap();
        // single component of norm 1/sqrt(3); the upper endpoint equals it
        // exactly, so grant rounding slack at the boundary
        let expect = 1.0 / 3.0f64.sqrt();
        assert!(c.total.0 <= expect + 1e-14 && expect <= c.total.1 + 1e-14);
        assert!(c.total.1 - c.total.0 < 1e-3);
        assert!(c.passes());
        assert_eq!(c.tail, (0.0, 0.0));
        assert_eq!(c.order3_norm_sq, rat(1, 4) + rat(1, 12));
    }

    #[test]
    fn full_report_small() {
        let r = full_report(1, 4, 512, 1e-12).unwrap();
        assert!(r.all_pass(), "checks: {:?}", r.checks());
        assert!(r.certificate.a_est > 0.1);
        assert!(r.certificate.deviation_norm < 0.9);
        assert!(full_report(0, 4, 512, 1e-12).is_err());
    }

    #[test]
    fn empty_and_invalid_inputs() {
        assert!(gram(&[]).is_err());
        assert!(haar_system(0).is_err());
        assert!(section_bounds(1, 0, 1e-12).is_err());
        assert!(deviation_norm(0, 3, 1e-12).is_err());
    }
}
