//! Cyclic Jacobi diagonalization for small dense symmetric matrices.
//!
//! Chosen over iterative extremal methods because the sections here stay
//! small (N <= 1024) and having the full spectrum makes the certificates
//! easy to audit. Deterministic: fixed sweep order, no pivot searches.

use crate::error::{Error, Result};

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i][j] * a[i][j];
            }
        }
    }
    sum.sqrt()
}

/// Diagonalizes a symmetric matrix in place by cyclic Jacobi rotations.
///
/// Runs sweeps until the off-diagonal Frobenius norm drops below `tol`
/// (absolute) or the sweep cap is reached; non-convergence is an error
/// carrying the best residual. Returns the eigenvalues in ascending order
/// together with the achieved residual.
pub fn symmetric_eigenvalues(
    mut a: Vec<Vec<f64>>,
    tol: f64,
    max_sweeps: usize,
) -> Result<(Vec<f64>, f64)> {
    let n = a.len();
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    debug_assert!(a.iter().all(|row| row.len() == n));

    let mut residual = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while residual >= tol {
        if sweeps >= max_sweeps {
            return Err(Error::EigenNoConvergence { residual });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    let new_p = aip - s * (aiq + tau * aip);
                    let new_q = aiq + s * (aip - tau * aiq);
                    a[i][p] = new_p;
                    a[p][i] = new_p;
                    a[i][q] = new_q;
                    a[q][i] = new_q;
                }
            }
        }
        sweeps += 1;
        residual = off_diagonal_norm(&a);
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok((eigenvalues, residual))
}
