//! The DDVV inequality for tuples of symmetric matrices, its invariance under
//! `O(n) × O(m)`, the lemmas used to prove it, and the copositivity
//! criteria for the commutator matrix `σ`.

mod copositive;
mod extremal;
mod lemmas;
mod sigma;
mod tuple;

pub use copositive::{
    copositive_oracle, copositive_property_k, project_to_simplex, CopositivityVerdict,
    PROPERTY_K_MAX_DIM,
};
pub use extremal::{extremal_case_a, extremal_case_b};
pub use lemmas::{
    arrow_matrix, key_lemma_slack, lemma1_slack, p_matrix_bound, sharp_pair_bound,
    PRECONDITION_TOL,
};
pub use sigma::{lili_slack, normalize_members, ones_minus, sigma_matrix, sigma_ddvv_slack};
pub use tuple::{
    canonical_reduce, ddvv_slack, group_act, CanonicalForm, SymmetricTuple, ORTHOGONAL_TOL,
    STRUCTURE_TOL,
};

use crate::linalg::{vectorize_sym, offdiag_slot, Matrix};

/// Lemma-1 data induced by a canonical tuple: `η` is the diagonal of `A_1`
/// with its mean removed and rescaled to unit length, and
/// `r_ij = Σ_{α≥2} (a_α)_ij²`. Returns `None` when `A_1` is a multiple of
/// the identity.
pub fn induced_lemma1_data(t: &SymmetricTuple) -> Option<(Vec<f64>, Matrix)> {
    let n = t.n();
    let diag = t.get(0).diagonal();
    let mean = diag.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = diag.iter().map(|d| d - mean).collect();
    let len = centered.iter().map(|c| c * c).sum::<f64>().sqrt();
    if len <= 1e-12 * (1.0 + t.get(0).norm()) {
        return None;
    }
    let eta = centered.iter().map(|c| c / len).collect();
    let mut r = Matrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            r[(i, j)] = t.matrices()[1..].iter().map(|a| a[(i, j)] * a[(i, j)]).sum();
        }
    }
    Some((eta, r))
}

/// `max_{i<j} Σ_{α≥2} μ_α⁻² (a_α)_ij²` with `μ_α² = ½‖A_α‖²`, skipping
/// members with `‖A_α‖ ≤ 1e-10 · (1 + ‖A‖)` (rounding noise would otherwise be
/// blown up to unit length). For pairwise orthogonal `A_2, …, A_m` this is at most 1: the
/// normalized vectorizations are orthonormal, so each coordinate's squared
/// components sum to at most 1.
pub fn orthonormal_row_bound(t: &SymmetricTuple) -> f64 {
    let n = t.n();
    let floor = STRUCTURE_TOL * (1.0 + t.total_norm_sq().sqrt());
    let columns: Vec<Vec<f64>> = t.matrices()[1..]
        .iter()
        .filter(|a| a.norm() > floor)
        .map(|a| {
            let v = vectorize_sym(a).expect("tuple members are symmetric");
            let mu = (0.5 * a.norm_sq()).sqrt();
            v.into_iter().map(|c| c / mu).collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let slot = offdiag_slot(n, i, j);
            worst = worst.max(columns.iter().map(|c| c[slot] * c[slot]).sum());
        }
    }
    worst
}
