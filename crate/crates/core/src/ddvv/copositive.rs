//! Copositivity (pseudo-positivity): `xᵀPx ≥ 0` for every entrywise
//! nonnegative `x`.
//!
//! [`copositive_property_k`] decides it through the principal-submatrix
//! eigenvector criterion; [`copositive_oracle`] minimizes the form over the
//! standard simplex by brute force and serves as the reference.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Matrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopositivityVerdict {
    pub copositive: bool,
    /// Nonnegative `x` with `Σ x = 1` and `xᵀPx < 0`, present when not
    /// copositive.
    pub certificate: Option<Vec<f64>>,
    /// Principal index set whose eigenvector criterion failed.
    pub failing_submatrix: Option<Vec<usize>>,
    /// Smallest value of `xᵀPx` found on the simplex (oracle only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplex_min: Option<f64>,
}

/// Largest dimension accepted by the exhaustive submatrix enumeration.
pub const PROPERTY_K_MAX_DIM: usize = 16;
/// Eigenvector components at or below this magnitude count as zero.
const ZERO_COMPONENT: f64 = 1e-10;

/// Decides copositivity by checking that in every principal submatrix each
/// eigenvector of an eigenvalue below `−1e-10 · (1 + ‖p‖)` has components of
/// both signs.
///
/// Eigenvalues in `[−εₑ, 0)` are treated as nonnegative, so matrices within
/// `εₑ` of the copositive boundary may be accepted. Within a repeated negative
/// eigenvalue only the basis returned by the eigensolver is inspected.
pub fn copositive_property_k(p: &Matrix) -> Result<CopositivityVerdict> {
    p.require_symmetric()?;
    let m = p.n();
    if m > PROPERTY_K_MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "property-K enumeration is capped at m = {PROPERTY_K_MAX_DIM} (got {m}); \
             use the simplex oracle for larger matrices"
        )));
    }
    let eps = 1e-10 * (1.0 + p.norm());

    let mut masks: Vec<u32> = (1..(1u32 << m)).collect();
    masks.sort_by_key(|mask| (mask.count_ones(), *mask));

    for mask in masks {
        let idx: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        let sub = p.principal_submatrix(&idx);
        let eig = sym_eigen(&sub)?;
        for (k, &value) in eig.values.iter().enumerate() {
            if value >= -eps {
                continue;
            }
            let v = eig.vector(k);
            let has_pos = v.iter().any(|c| *c > ZERO_COMPONENT);
            let has_neg = v.iter().any(|c| *c < -ZERO_COMPONENT);
            if has_pos && has_neg {
                continue;
            }
            let mut x = vec![0.0; m];
            for (slot, c) in idx.iter().zip(&v) {
                x[*slot] = c.abs();
            }
            let total: f64 = x.iter().sum();
            for xi in &mut x {
                *xi /= total;
            }
            if p.quadratic_form(&x) < 0.0 {
                return Ok(CopositivityVerdict {
                    copositive: false,
                    certificate: Some(x),
                    failing_submatrix: Some(idx),
                    simplex_min: None,
                });
            }
        }
    }
    Ok(CopositivityVerdict {
        copositive: true,
        certificate: None,
        failing_submatrix: None,
        simplex_min: None,
    })
}

const REFINE_ITERS: usize = 20_000;

/// Minimizes `xᵀPx` over `{x ≥ 0, Σ x = 1}`: exhaustive evaluation on the
/// lattice with spacing `1/resolution`, then projected gradient descent from
/// the best lattice point. Copositive iff the minimum is at least
/// `−1e-9 · (1 + ‖p‖)`.
pub fn copositive_oracle(p: &Matrix, resolution: usize) -> Result<CopositivityVerdict> {
    p.require_symmetric()?;
    if resolution < 2 {
        return Err(Error::InvalidInput(format!(
            "oracle resolution must be at least 2, got {resolution}"
        )));
    }
    let m = p.n();
    if m == 0 {
        return Ok(CopositivityVerdict {
            copositive: true,
            certificate: None,
            failing_submatrix: None,
            simplex_min: Some(0.0),
        });
    }

    let mut counts = vec![0usize; m];
    let mut best_value = f64::INFINITY;
    let mut best = vec![0.0; m];
    let mut x = vec![0.0; m];
    for_each_composition(resolution, &mut counts, 0, &mut |c| {
        for (xi, ci) in x.iter_mut().zip(c) {
            *xi = *ci as f64 / resolution as f64;
        }
        let v = p.quadratic_form(&x);
        if v < best_value {
            best_value = v;
            best.copy_from_slice(&x);
        }
    });

    let (refined, refined_value) = refine_on_simplex(p, &best);
    if refined_value < best_value {
        best = refined;
        best_value = refined_value;
    }

    let copositive = best_value >= -1e-9 * (1.0 + p.norm());
    Ok(CopositivityVerdict {
        copositive,
        certificate: (!copositive).then_some(best),
        failing_submatrix: None,
        simplex_min: Some(best_value),
    })
}

/// Calls `f` with every `counts` of length `m` summing to `total`.
fn for_each_composition(total: usize, counts: &mut [usize], pos: usize, f: &mut impl FnMut(&[usize])) {
    let m = counts.len();
    if pos == m - 1 {
        counts[pos] = total;
        f(counts);
        return;
    }
    for c in 0..=total {
        counts[pos] = c;
        for_each_composition(total - c, counts, pos + 1, f);
    }
}

fn refine_on_simplex(p: &Matrix, start: &[f64]) -> (Vec<f64>, f64) {
    let lipschitz = 2.0 * p.norm();
    if lipschitz == 0.0 {
        return (start.to_vec(), 0.0);
    }
    let step = 1.0 / lipschitz;
    let mut x = start.to_vec();
    let mut value = p.quadratic_form(&x);
    for _ in 0..REFINE_ITERS {
        let grad = p.mul_vec(&x);
        let trial: Vec<f64> = x.iter().zip(&grad).map(|(xi, g)| xi - 2.0 * step * g).collect();
        let next = project_to_simplex(&trial);
        let next_value = p.quadratic_form(&next);
        let moved = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = next;
        value = next_value;
        if moved < 1e-15 {
            break;
        }
    }
    (x, value)
}

/// Euclidean projection onto `{x ≥ 0, Σ x = 1}` (sort-and-threshold).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (k as f64 + 1.0);
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}
