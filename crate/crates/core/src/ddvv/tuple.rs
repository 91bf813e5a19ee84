use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{commutator_norm_sq, frobenius_inner, sym_eigen, Matrix};
use crate::report::SlackReport;

/// Ordered list `(A_1, …, A_m)` of symmetric `n × n` matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TupleRepr", into = "TupleRepr")]
pub struct SymmetricTuple {
    n: usize,
    matrices: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct TupleRepr {
    n: usize,
    m: usize,
    matrices: Vec<Matrix>,
}

impl TryFrom<TupleRepr> for SymmetricTuple {
    type Error = Error;

    fn try_from(repr: TupleRepr) -> Result<Self> {
        if repr.matrices.len() != repr.m {
            return Err(Error::Parse(format!(
                "tuple declares m = {} but lists {} matrices",
                repr.m,
                repr.matrices.len()
            )));
        }
        let t = SymmetricTuple::new(repr.matrices)?;
        if t.n != repr.n {
            return Err(Error::Parse(format!(
                "tuple declares n = {} but its matrices are {}x{}",
                repr.n, t.n, t.n
            )));
        }
        Ok(t)
    }
}

impl From<SymmetricTuple> for TupleRepr {
    fn from(t: SymmetricTuple) -> Self {
        TupleRepr {
            n: t.n,
            m: t.matrices.len(),
            matrices: t.matrices,
        }
    }
}

impl SymmetricTuple {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidInput("a tuple needs at least one matrix".into()))?;
        let n = first.n();
        if n == 0 {
            return Err(Error::InvalidInput("matrix side length must be positive".into()));
        }
        for a in &matrices {
            if a.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: a.n(),
                });
            }
            a.require_symmetric()?;
        }
        Ok(SymmetricTuple { n, matrices })
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        SymmetricTuple {
            n,
            matrices: vec![Matrix::zeros(n); m],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn get(&self, r: usize) -> &Matrix {
        &self.matrices[r]
    }

    pub fn into_matrices(self) -> Vec<Matrix> {
        self.matrices
    }

    /// `Σ_r ‖A_r‖²`
    pub fn total_norm_sq(&self) -> f64 {
        self.matrices.iter().map(Matrix::norm_sq).sum()
    }

    /// The `m × m` Gram matrix `⟨A_α, A_β⟩`.
    pub fn gram(&self) -> Matrix {
        let m = self.m();
        let mut g = Matrix::zeros(m);
        for a in 0..m {
            for b in a..m {
                let v = frobenius_inner(&self.matrices[a], &self.matrices[b])
                    .expect("tuple members share a dimension");
                g[(a, b)] = v;
                g[(b, a)] = v;
            }
        }
        g
    }

    /// `Σ_{r<s} ‖[A_r, A_s]‖²`
    pub fn commutator_sum(&self) -> f64 {
        let mut total = 0.0;
        for r in 0..self.m() {
            for s in (r + 1)..self.m() {
                total += commutator_norm_sq(&self.matrices[r], &self.matrices[s])
                    .expect("tuple members share a dimension");
            }
        }
        total
    }

    pub fn scale(&self, s: f64) -> SymmetricTuple {
        SymmetricTuple {
            n: self.n,
            matrices: self.matrices.iter().map(|a| a.scale(s)).collect(),
        }
    }

    /// Largest entrywise difference from another tuple of the same shape.
    pub fn max_abs_diff(&self, other: &SymmetricTuple) -> f64 {
        self.matrices
            .iter()
            .zip(&other.matrices)
            .fold(0.0, |acc, (a, b)| acc.max(a.max_abs_diff(b)))
    }
}

/// DDVV inequality `(Σ‖A_r‖²)² ≥ 2 Σ_{r<s} ‖[A_r, A_s]‖²`.
pub fn ddvv_slack(t: &SymmetricTuple) -> SlackReport {
    let total = t.total_norm_sq();
    SlackReport::lower_bound("ddvv", total * total, 2.0 * t.commutator_sum())
}

/// Orthogonality tolerance for group elements.
pub const ORTHOGONAL_TOL: f64 = 1e-10;

/// Action of `(p, q) ∈ O(n) × O(m)`: member `r` becomes
/// `Σ_j q_rj · p A_j pᵀ`.
pub fn group_act(t: &SymmetricTuple, p: &Matrix, q: &Matrix) -> Result<SymmetricTuple> {
    if p.n() != t.n() {
        return Err(Error::DimensionMismatch {
            expected: t.n(),
            actual: p.n(),
        });
    }
    if q.n() != t.m() {
        return Err(Error::DimensionMismatch {
            expected: t.m(),
            actual: q.n(),
        });
    }
    p.require_orthogonal("p", ORTHOGONAL_TOL)?;
    q.require_orthogonal("q", ORTHOGONAL_TOL)?;

    let conjugated: Vec<Matrix> = t.matrices.iter().map(|a| a.conjugate(p)).collect();
    let n = t.n();
    let matrices = (0..t.m())
        .map(|r| {
            let mut acc = Matrix::zeros(n);
            for (j, a) in conjugated.iter().enumerate() {
                let w = q[(r, j)];
                if w != 0.0 {
                    acc = &acc + &a.scale(w);
                }
            }
            // p A pᵀ is symmetric only up to rounding; restore it exactly.
            Matrix::from_fn(n, |i, k| 0.5 * (acc[(i, k)] + acc[(k, i)]))
        })
        .collect();
    Ok(SymmetricTuple { n, matrices })
}

/// Representative of a tuple's orbit with `A_1` diagonal, members pairwise
/// Frobenius-orthogonal and norms nonincreasing, plus the group element
/// `(p, q)` that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub tuple: SymmetricTuple,
    pub p: Matrix,
    pub q: Matrix,
    /// Set when the tuple is entirely zero, in which case `p = I`.
    pub degenerate: bool,
}

/// Structural tolerance for canonical-form checks.
pub const STRUCTURE_TOL: f64 = 1e-10;

impl CanonicalForm {
    /// Checks the canonical-form invariants against the tuple it came from.
    pub fn verify(&self, original: &SymmetricTuple) -> Result<()> {
        let t = &self.tuple;
        let a1 = t.get(0);
        if a1.off_diagonal_norm() > STRUCTURE_TOL * (1.0 + a1.norm()) {
            return Err(Error::Precondition(format!(
                "reduced A_1 is not diagonal (off-diagonal mass {:e})",
                a1.off_diagonal_norm()
            )));
        }
        let g = t.gram();
        let scale = 1.0 + t.total_norm_sq();
        for a in 0..t.m() {
            for b in (a + 1)..t.m() {
                if g[(a, b)].abs() > STRUCTURE_TOL * scale {
                    return Err(Error::Precondition(format!(
                        "members {a} and {b} are not orthogonal ({:e})",
                        g[(a, b)]
                    )));
                }
            }
        }
        for r in 1..t.m() {
            if t.get(r).norm() > t.get(r - 1).norm() + 1e-12 * scale.sqrt() {
                return Err(Error::Precondition(format!("norms increase at member {r}")));
            }
        }
        let replay = group_act(original, &self.p, &self.q)?;
        let diff = replay.max_abs_diff(t);
        if diff > 1e-9 * (1.0 + original.total_norm_sq().sqrt()) {
            return Err(Error::Precondition(format!(
                "(p, q) does not reproduce the reduced tuple (deviation {diff:e})"
            )));
        }
        Ok(())
    }
}

/// Reduces a tuple to canonical form.
///
/// First an `O(m)` rotation diagonalizes the Gram matrix (eigenvalues in
/// descending order); then an `O(n)` conjugation diagonalizes the new `A_1`.
/// Conjugation preserves Frobenius inner products, so the second step keeps
/// the members orthogonal. The first nonzero diagonal entry of the reduced
/// `A_1` is made nonnegative by flipping the sign of the first row of `q`.
pub fn canonical_reduce(t: &SymmetricTuple) -> Result<CanonicalForm> {
    let n = t.n();
    let m = t.m();
    let gram_eig = sym_eigen(&t.gram())?;
    let mut q = gram_eig.vectors.transpose();
    let rotated = group_act(t, &Matrix::identity(n), &q)?;

    let a1 = rotated.get(0);
    let degenerate = a1.norm() == 0.0;
    let p = if degenerate {
        Matrix::identity(n)
    } else {
        sym_eigen(a1)?.vectors.transpose()
    };

    let mut tuple = group_act(t, &p, &q)?;
    let lead = tuple.get(0);
    let cutoff = 1e-12 * (1.0 + lead.norm());
    if let Some(first) = lead.diagonal().into_iter().find(|d| d.abs() > cutoff) {
        if first < 0.0 {
            for j in 0..m {
                q[(0, j)] = -q[(0, j)];
            }
            tuple = group_act(t, &p, &q)?;
        }
    }

    Ok(CanonicalForm {
        tuple,
        p,
        q,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{gaussian_symmetric, random_orthogonal, trial_rng};

    fn random_tuple(seed: u64, n: usize, m: usize) -> SymmetricTuple {
        let mut rng = trial_rng(seed, 0);
        SymmetricTuple::new((0..m).map(|_| gaussian_symmetric(&mut rng, n)).collect()).unwrap()
    }

    #[test]
    fn single_member_slack_is_fourth_power() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [2.0, -1.0]]).unwrap();
        let r = ddvv_slack(&SymmetricTuple::new(vec![a.clone()]).unwrap());
        assert_eq!(r.rhs, 0.0);
        assert_eq!(r.slack, a.norm_sq() * a.norm_sq());
    }

    #[test]
    fn rejects_mixed_dimensions_and_asymmetry() {
        assert!(SymmetricTuple::new(vec![Matrix::zeros(2), Matrix::zeros(3)]).is_err());
        assert!(SymmetricTuple::new(vec![Matrix::unit(2, 0, 1)]).is_err());
        assert!(SymmetricTuple::new(vec![]).is_err());
    }

    #[test]
    fn identity_action_is_noop() {
        let t = random_tuple(3, 4, 3);
        let out = group_act(&t, &Matrix::identity(4), &Matrix::identity(3)).unwrap();
        assert_eq!(out, t);
    }

    #[test]
    fn conjugation_preserves_both_sides() {
        let t = random_tuple(5, 4, 3);
        let p = random_orthogonal(&mut trial_rng(9, 1), 4);
        let before = ddvv_slack(&t);
        let after = ddvv_slack(&group_act(&t, &p, &Matrix::identity(3)).unwrap());
        assert!((before.lhs - after.lhs).abs() <= 1e-9 * before.lhs);
        assert!((before.rhs - after.rhs).abs() <= 1e-9 * before.rhs);
    }

    #[test]
    fn permutation_action_permutes_members() {
        let t = random_tuple(11, 3, 3);
        let q = Matrix::from_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0]]).unwrap();
        let out = group_act(&t, &Matrix::identity(3), &q).unwrap();
        assert_eq!(out.get(0), t.get(1));
        assert_eq!(out.get(1), &t.get(2).scale(-1.0));
        assert_eq!(out.get(2), t.get(0));
    }

    #[test]
    fn rejects_non_orthogonal_group_element() {
        let t = random_tuple(1, 2, 2);
        let p = Matrix::from_diag(&[1.0, 2.0]);
        assert!(matches!(
            group_act(&t, &p, &Matrix::identity(2)),
            Err(Error::NotOrthogonal { what: "p", .. })
        ));
    }

    #[test]
    fn reduction_of_zero_tuple_is_degenerate() {
        let t = SymmetricTuple::zeros(3, 2);
        let cf = canonical_reduce(&t).unwrap();
        assert!(cf.degenerate);
        assert_eq!(cf.p, Matrix::identity(3));
        assert_eq!(cf.tuple, t);
        cf.verify(&t).unwrap();
    }

    #[test]
    fn reduction_postconditions_on_random_tuples() {
        for seed in 0..50 {
            let t = random_tuple(seed, 2 + (seed as usize % 5), 1 + (seed as usize % 4));
            let cf = canonical_reduce(&t).unwrap();
            assert!(!cf.degenerate);
            cf.verify(&t).unwrap();
            let before = ddvv_slack(&t);
            let after = ddvv_slack(&cf.tuple);
            assert!((before.slack - after.slack).abs() <= 1e-9 * (1.0 + before.lhs));
            let lead = cf.tuple.get(0).diagonal();
            let first = lead.iter().find(|d| d.abs() > 1e-12).unwrap();
            assert!(*first > 0.0);
        }
    }
}
