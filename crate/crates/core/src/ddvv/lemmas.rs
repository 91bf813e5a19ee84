//! The inequalities behind the DDVV proof: the weighted-difference bound on a
//! unit traceless vector, its arrow-matrix eigenvalue bound, the key
//! commutator estimate against a unit diagonal matrix, and its two-matrix
//! sharpening.

use super::SymmetricTuple;
use crate::error::{Error, Result};
use crate::linalg::{commutator_norm_sq, frobenius_inner, sym_eigen, Matrix};
use crate::report::SlackReport;

/// Structural tolerance for lemma preconditions.
pub const PRECONDITION_TOL: f64 = 1e-10;

/// `Σ_{i<j} (η_i − η_j)² r_ij ≤ Σ_{i<j} r_ij + max r_ij` for `Σ η = 0`,
/// `Σ η² = 1` and `r_ij ≥ 0`.
///
/// Only the strict upper triangle of `r` is read.
pub fn lemma1_slack(eta: &[f64], r: &Matrix) -> Result<SlackReport> {
    let n = eta.len();
    if r.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: r.n(),
        });
    }
    let sum: f64 = eta.iter().sum();
    let sum_sq: f64 = eta.iter().map(|e| e * e).sum();
    if sum.abs() > PRECONDITION_TOL {
        return Err(Error::Precondition(format!("Σ η = {sum:e}, expected 0")));
    }
    if (sum_sq - 1.0).abs() > PRECONDITION_TOL {
        return Err(Error::Precondition(format!("Σ η² = {sum_sq}, expected 1")));
    }

    let mut lhs = 0.0;
    let mut total = 0.0;
    let mut max: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let w = r[(i, j)];
            if w < 0.0 {
                return Err(Error::Precondition(format!("negative weight r[{i}][{j}] = {w}")));
            }
            let d = eta[i] - eta[j];
            lhs += d * d * w;
            total += w;
            max = max.max(w);
        }
    }
    Ok(SlackReport::upper_bound("lemma1", lhs, total + max))
}

/// The arrow matrix with corner `Σ s_j`, diagonal `s_j` and first row and
/// column `−s_j`.
pub fn arrow_matrix(s: &[f64]) -> Matrix {
    let k = s.len();
    let mut p = Matrix::zeros(k + 1);
    p[(0, 0)] = s.iter().sum();
    for (j, &sj) in s.iter().enumerate() {
        p[(0, j + 1)] = -sj;
        p[(j + 1, 0)] = -sj;
        p[(j + 1, j + 1)] = sj;
    }
    p
}

/// `λ_max(P) ≤ Σ s_j + max s_j` for the [`arrow_matrix`] of nonnegative `s`.
pub fn p_matrix_bound(s: &[f64]) -> Result<SlackReport> {
    if let Some(bad) = s.iter().find(|v| **v < 0.0 || !v.is_finite()) {
        return Err(Error::Precondition(format!("weights must be nonnegative, got {bad}")));
    }
    let lambda_max = sym_eigen(&arrow_matrix(s))?.max_value();
    let rhs = s.iter().sum::<f64>() + s.iter().copied().fold(0.0, f64::max);
    Ok(SlackReport::upper_bound("p_matrix", lambda_max, rhs))
}

/// `Σ_{α≥2} ‖[A_1, A_α]‖² ≤ Σ_{α≥2} ‖A_α‖² + ‖A_2‖²` for a unit diagonal
/// `A_1` and pairwise orthogonal `A_2, …, A_m` with nonincreasing norms.
///
/// `A_1` itself need not be orthogonal to the others. Ties among the norms
/// are accepted; `‖A_2‖²` is used as written.
pub fn key_lemma_slack(t: &SymmetricTuple) -> Result<SlackReport> {
    let a = t.get(0);
    if a.off_diagonal_norm() > PRECONDITION_TOL * (1.0 + a.norm()) {
        return Err(Error::Precondition(format!(
            "A_1 is not diagonal (off-diagonal mass {:e})",
            a.off_diagonal_norm()
        )));
    }
    if (a.norm() - 1.0).abs() > PRECONDITION_TOL {
        return Err(Error::Precondition(format!("‖A_1‖ = {}, expected 1", a.norm())));
    }
    let rest = &t.matrices()[1..];
    let scale = 1.0 + rest.iter().map(Matrix::norm_sq).sum::<f64>();
    for (i, x) in rest.iter().enumerate() {
        for (j, y) in rest.iter().enumerate().skip(i + 1) {
            let ip = frobenius_inner(x, y)?;
            if ip.abs() > PRECONDITION_TOL * scale {
                return Err(Error::Precondition(format!(
                    "A_{} and A_{} are not orthogonal (⟨·,·⟩ = {ip:e})",
                    i + 2,
                    j + 2
                )));
            }
        }
    }
    for (i, w) in rest.windows(2).enumerate() {
        if w[1].norm() > w[0].norm() + 1e-12 * scale.sqrt() {
            return Err(Error::Precondition(format!(
                "norms increase from A_{} to A_{}",
                i + 2,
                i + 3
            )));
        }
    }

    let mut lhs = 0.0;
    for x in rest {
        lhs += commutator_norm_sq(a, x)?;
    }
    let rest_sq: f64 = rest.iter().map(Matrix::norm_sq).sum();
    let lead = rest.first().map_or(0.0, Matrix::norm_sq);
    Ok(SlackReport::upper_bound("key_lemma", lhs, rest_sq + lead))
}

/// `‖[a, b]‖² ≤ ‖b‖² + 2‖b‖_∞²` for unit diagonal `a` and symmetric `b`.
pub fn sharp_pair_bound(a: &Matrix, b: &Matrix) -> Result<SlackReport> {
    a.check_same_dim(b)?;
    if a.off_diagonal_norm() > PRECONDITION_TOL * (1.0 + a.norm()) {
        return Err(Error::Precondition("a is not diagonal".into()));
    }
    if (a.norm() - 1.0).abs() > PRECONDITION_TOL {
        return Err(Error::Precondition(format!("‖a‖ = {}, expected 1", a.norm())));
    }
    b.require_symmetric()?;
    let inf = b.max_abs();
    Ok(SlackReport::upper_bound(
        "sharp_pair",
        commutator_norm_sq(a, b)?,
        b.norm_sq() + 2.0 * inf * inf,
    ))
}
