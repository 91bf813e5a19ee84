use serde::{Deserialize, Serialize};

use super::{sym_eigen, Matrix};
use crate::error::Result;

/// `x = q1 · diag(lambda) · q2` with `q1`, `q2` orthogonal and `lambda`
/// nonnegative, sorted nonincreasing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularDecomposition {
    pub q1: Matrix,
    pub lambda: Vec<f64>,
    pub q2: Matrix,
}

impl SingularDecomposition {
    pub fn reconstruct(&self) -> Matrix {
        &(&self.q1 * &Matrix::from_diag(&self.lambda)) * &self.q2
    }
}

/// Singular values below this fraction of the largest get completed left
/// vectors instead of `x v / s`.
const RANK_CUTOFF: f64 = 1e-13;

/// SVD through the eigendecomposition of `xᵀx`.
///
/// Right vectors are the eigenvectors of `xᵀx`; each left vector is recovered
/// as `x v_k / s_k` with `s_k = ‖x v_k‖`, then Gram–Schmidt re-orthogonalized
/// in descending order. Left vectors of (numerically) zero singular values are
/// completed from the standard basis.
pub fn svd(x: &Matrix) -> Result<SingularDecomposition> {
    let n = x.n();
    let gram = &x.transpose() * x;
    let eig = sym_eigen(&gram)?;

    let mut triples: Vec<(f64, Vec<f64>, Vec<f64>)> = (0..n)
        .map(|k| {
            let v = eig.vector(k);
            let u = x.mul_vec(&v);
            let s = norm(&u);
            (s, u, v)
        })
        .collect();
    triples.sort_by(|a, b| b.0.total_cmp(&a.0));

    let s_max = triples.first().map_or(0.0, |t| t.0);
    let mut left: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut pending = Vec::new();
    for (k, (s, u, _)) in triples.iter().enumerate() {
        if *s > RANK_CUTOFF * s_max && *s > 0.0 {
            let mut u = u.clone();
            orthogonalize(&mut u, &left);
            let len = norm(&u);
            if len > 0.5 * s {
                u.iter_mut().for_each(|c| *c /= len);
                left.push(u);
                continue;
            }
        }
        pending.push(k);
        left.push(Vec::new());
    }

    // Orthonormal completion for the rank-deficient columns.
    let mut basis = 0;
    for k in pending {
        let done: Vec<Vec<f64>> = left.iter().filter(|u| !u.is_empty()).cloned().collect();
        loop {
            let mut e = vec![0.0; n];
            e[basis] = 1.0;
            basis += 1;
            orthogonalize(&mut e, &done);
            orthogonalize(&mut e, &done);
            let len = norm(&e);
            if len > 1e-6 {
                e.iter_mut().for_each(|c| *c /= len);
                left[k] = e;
                break;
            }
        }
    }

    let lambda = triples.iter().map(|t| t.0).collect();
    let q1 = Matrix::from_columns(&left);
    let q2 = Matrix::from_fn(n, |i, j| triples[i].2[j]);
    Ok(SingularDecomposition { q1, lambda, q2 })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    for u in against.iter().filter(|u| !u.is_empty()) {
        let d: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(u).for_each(|(c, a)| *c -= d * a);
    }
}
