use std::f64::consts::FRAC_1_SQRT_2;

use super::Matrix;
use crate::error::Result;

/// Maps a symmetric matrix to `ℝ^{n(n+1)/2}`: the strictly upper entries
/// `a_12, …, a_1n, a_23, …, a_(n−1)n` followed by `a_11/√2, …, a_nn/√2`.
///
/// The image has squared Euclidean norm `½‖a‖²`.
pub fn vectorize_sym(a: &Matrix) -> Result<Vec<f64>> {
    a.require_symmetric()?;
    let n = a.n();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(a[(i, j)]);
        }
    }
    out.extend((0..n).map(|i| a[(i, i)] * FRAC_1_SQRT_2));
    Ok(out)
}

/// Slot of the off-diagonal entry `(i, j)`, `i < j`, in [`vectorize_sym`].
pub fn offdiag_slot(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_to_zero() {
        assert_eq!(vectorize_sym(&Matrix::zeros(3)).unwrap(), vec![0.0; 6]);
    }

    #[test]
    fn identity() {
        let v = vectorize_sym(&Matrix::identity(2)).unwrap();
        assert_eq!(v, vec![0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let sq: f64 = v.iter().map(|c| c * c).sum();
        assert!((sq - 1.0).abs() < 1e-15);
    }

    #[test]
    fn offdiagonal_spike() {
        let a = Matrix::from_rows(&[[0.0, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, 0.0]]).unwrap();
        let v = vectorize_sym(&a).unwrap();
        assert_eq!(v, vec![FRAC_1_SQRT_2, 0.0, 0.0]);
        assert_eq!(v[offdiag_slot(2, 0, 1)], FRAC_1_SQRT_2);
    }

    #[test]
    fn slot_layout() {
        let n = 4;
        let a = Matrix::from_fn(n, |i, j| if i == j { 0.0 } else { (10 * i.min(j) + i.max(j)) as f64 });
        let v = vectorize_sym(&a).unwrap();
        for i in 0..n {
            for j in (i + 1)..n {
                assert_eq!(v[offdiag_slot(n, i, j)], a[(i, j)]);
            }
        }
    }

    #[test]
    fn rejects_non_symmetric() {
        assert!(vectorize_sym(&Matrix::unit(2, 0, 1)).is_err());
    }
}
