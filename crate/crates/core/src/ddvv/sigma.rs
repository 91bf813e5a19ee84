use super::SymmetricTuple;
use crate::error::{Error, Result};
use crate::linalg::{commutator_norm_sq, Matrix};
use crate::report::SlackReport;

/// `σ_ij = ‖[A_i, A_j]‖²` for a tuple of unit-norm matrices.
pub fn sigma_matrix(t: &SymmetricTuple) -> Result<Matrix> {
    for (i, a) in t.matrices().iter().enumerate() {
        if (a.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::Precondition(format!(
                "member {} has norm {}, expected 1",
                i + 1,
                a.norm()
            )));
        }
    }
    let m = t.m();
    let mut s = Matrix::zeros(m);
    for i in 0..m {
        for j in (i + 1)..m {
            let v = commutator_norm_sq(t.get(i), t.get(j))?;
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    Ok(s)
}

/// Rescales every nonzero member to unit norm.
pub fn normalize_members(t: &SymmetricTuple) -> Result<SymmetricTuple> {
    let members = t
        .matrices()
        .iter()
        .map(|a| {
            let norm = a.norm();
            if norm == 0.0 {
                Err(Error::Precondition("cannot normalize a zero member".into()))
            } else {
                Ok(a.scale(1.0 / norm))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    SymmetricTuple::new(members)
}

fn check_weights(sigma: &Matrix, x: &[f64]) -> Result<()> {
    if x.len() != sigma.n() {
        return Err(Error::DimensionMismatch {
            expected: sigma.n(),
            actual: x.len(),
        });
    }
    if let Some(bad) = x.iter().find(|v| **v < 0.0 || !v.is_finite()) {
        return Err(Error::Precondition(format!("x must be nonnegative, got {bad}")));
    }
    Ok(())
}

/// `Σ σ_ij x_i x_j ≤ (3/2)(Σ x_i)² − Σ x_i²` for nonnegative `x`.
pub fn lili_slack(sigma: &Matrix, x: &[f64]) -> Result<SlackReport> {
    check_weights(sigma, x)?;
    let sum: f64 = x.iter().sum();
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();
    Ok(SlackReport::upper_bound(
        "lili",
        sigma.quadratic_form(x),
        1.5 * sum * sum - sum_sq,
    ))
}

/// `Σ σ_ij x_i x_j ≤ (Σ x_i)²`, the quadratic-form reading of DDVV.
pub fn sigma_ddvv_slack(sigma: &Matrix, x: &[f64]) -> Result<SlackReport> {
    check_weights(sigma, x)?;
    let sum: f64 = x.iter().sum();
    Ok(SlackReport::upper_bound("sigma_ddvv", sigma.quadratic_form(x), sum * sum))
}

/// `S − Σ` where `S` is the all-ones matrix.
pub fn ones_minus(sigma: &Matrix) -> Matrix {
    Matrix::from_fn(sigma.n(), |i, j| 1.0 - sigma[(i, j)])
}
