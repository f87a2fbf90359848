//! Shared test support: an independent integration oracle and cached data.
//!
//! The oracle integrates by collocation (values at interior rational nodes,
//! weights from a Vandermonde solve), a completely different route from the
//! library's closed-form antiderivatives, so agreement between the two is a
//! real check rather than a tautology.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use spline_affine_core::{decompose, ChaosDecomposition, PiecewisePoly, Rational};

fn big(i: i64) -> BigInt {
    BigInt::from(i)
}

/// Solves a dense rational linear system by Gaussian elimination.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    (0..n).map(|i| &b[i] / &a[i][i]).collect()
}

/// Quadrature weights for the given nodes that integrate polynomials of
/// degree < nodes.len() exactly over [a, b].
fn collocation_weights(nodes: &[Rational], a: &Rational, b: &Rational) -> Vec<Rational> {
    let n = nodes.len();
    let mut system = vec![vec![Rational::zero(); n]; n];
    let mut moments = vec![Rational::zero(); n];
    for k in 0..n {
        for (i, x) in nodes.iter().enumerate() {
            let mut p = Rational::one();
            for _ in 0..k {
                p *= x;
            }
            system[k][i] = p;
        }
        let mut bp = b.clone();
        let mut ap = a.clone();
        for _ in 0..k {
            bp *= b;
            ap *= a;
        }
        moments[k] = (bp - ap) / Rational::from_integer(big(k as i64 + 1));
    }
    solve(system, moments)
}

/// Exact integral of `p * q` over one period, by collocation on each piece of
/// the common dyadic grid. Independent of the library's integration path.
pub fn oracle_inner_product(p: &PiecewisePoly, q: &PiecewisePoly) -> Rational {
    let level = p.level().max(q.level());
    let count = 1u64 << level;
    let node_count = p.degree() + q.degree() + 1;
    let mut total = Rational::zero();
    for i in 0..count {
        let a = Rational::new(big(i as i64), big(count as i64));
        let b = Rational::new(big(i as i64 + 1), big(count as i64));
        // interior nodes only: evaluation is right-continuous, so touching
        // the right endpoint would read the next piece
        let nodes: Vec<Rational> = (0..node_count)
            .map(|j| {
                &a + (&b - &a) * Rational::new(big(2 * j as i64 + 1), big(2 * node_count as i64))
            })
            .collect();
        let weights = collocation_weights(&nodes, &a, &b);
        for (x, w) in nodes.iter().zip(&weights) {
            total += w * p.eval(x) * q.eval(x);
        }
    }
    total
}

/// Exact integral of `p` over one period via collocation.
pub fn oracle_integral(p: &PiecewisePoly) -> Rational {
    oracle_inner_product(p, &PiecewisePoly::constant(Rational::one()))
}

/// Random piecewise polynomial with numerators and denominators up to 100.
pub fn random_poly(rng: &mut StdRng, max_level: u32, max_degree: usize) -> PiecewisePoly {
    let level = rng.gen_range(0..=max_level);
    let degree = rng.gen_range(0..=max_degree);
    let pieces = (0..1u64 << level)
        .map(|_| {
            (0..=degree)
                .map(|_| {
                    Rational::new(big(rng.gen_range(-100..=100)), big(rng.gen_range(1..=100)))
                })
                .collect()
        })
        .collect();
    PiecewisePoly::new(level, pieces).unwrap()
}

/// Same, with the mean subtracted so the result is exactly zero-mean.
pub fn random_zero_mean_poly(rng: &mut StdRng, max_level: u32, max_degree: usize) -> PiecewisePoly {
    let p = random_poly(rng, max_level, max_degree);
    let mean = p.mean();
    let one = PiecewisePoly::constant(Rational::one());
    PiecewisePoly::linear_combine(&[(Rational::one(), &p), (-mean, &one)])
}

/// Chaos decompositions for m = 1..=6 at the default truncation 2^12,
/// computed once and shared across the suite.
pub fn default_decompositions() -> &'static [ChaosDecomposition] {
    static CELL: OnceLock<Vec<ChaosDecomposition>> = OnceLock::new();
    CELL.get_or_init(|| (1..=6).map(|m| decompose(m, 1 << 12).expect("decompose")).collect())
}
