use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};

/// Eigenpairs of a symmetric matrix.
///
/// `values` is sorted descending and column `k` of `vectors` pairs with
/// `values[k]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    pub fn max_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `V · diag(values) · Vᵀ`
    pub fn reconstruct(&self) -> Matrix {
        let d = Matrix::from_diag(&self.values);
        &(&self.vectors * &d) * &self.vectors.transpose()
    }
}

/// Per-rotation skip threshold relative to `‖A‖`.
const ROTATION_THRESHOLD: f64 = 1e-14;
/// Convergence target on the off-diagonal Frobenius mass relative to `‖A‖`.
const OFF_DIAGONAL_TARGET: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
pub fn sym_eigen(a: &Matrix) -> Result<EigenDecomposition> {
    a.require_symmetric()?;
    let n = a.n();
    // Symmetrize so rounding-level asymmetry cannot leak into the rotations.
    let mut w = Matrix::from_fn(n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let mut v = Matrix::identity(n);
    let scale = w.norm();

    if scale > 0.0 {
        let skip = ROTATION_THRESHOLD * scale;
        let target = OFF_DIAGONAL_TARGET * scale;
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if w.off_diagonal_norm() <= target {
                converged = true;
                break;
            }
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    if w[(p, q)].abs() > skip {
                        rotate(&mut w, &mut v, p, q);
                        rotated = true;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged && w.off_diagonal_norm() > target {
            return Err(Error::NoConvergence("Jacobi eigensolver"));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps the Jacobi output order within ties.
    order.sort_by(|&i, &j| w[(j, j)].total_cmp(&w[(i, i)]));
    let values = order.iter().map(|&k| w[(k, k)]).collect();
    let vectors = Matrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}

/// Largest eigenvalue and a unit eigenvector for it.
pub fn top_eigenpair(a: &Matrix) -> Result<(f64, Vec<f64>)> {
    let eig = sym_eigen(a)?;
    Ok((eig.max_value(), eig.vector(0)))
}

/// Applies the Jacobi rotation annihilating `w[p][q]`, accumulating it into
/// the columns of `v`.
fn rotate(w: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let n = w.n();
    let apq = w[(p, q)];
    let app = w[(p, p)];
    let aqq = w[(q, q)];
    let theta = (aqq - app) / (2.0 * apq);
    // signum(0.0) == 1.0, so a zero angle gives the 45° rotation.
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = w[(k, p)];
        let akq = w[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        w[(k, p)] = new_kp;
        w[(p, k)] = new_kp;
        w[(k, q)] = new_kq;
        w[(q, k)] = new_kq;
    }
    w[(p, p)] = app - t * apq;
    w[(q, q)] = aqq + t * apq;
    w[(p, q)] = 0.0;
    w[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}
