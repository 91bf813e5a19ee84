//! Explicit tuples attaining equality in the key commutator estimate.

use std::f64::consts::FRAC_1_SQRT_2;

use super::SymmetricTuple;
use crate::linalg::Matrix;

/// The two-spike pair embedded in the top-left corner of `n × n`:
/// `A_1 = diag(1/√2, −1/√2, 0, …)` and `A_2 = c · (E_12 + E_21)/√2`.
///
/// Key-lemma equality holds for every `c`; the DDVV slack equals
/// `(1 − c²)²`, so it vanishes exactly at `c = ±1`.
///
/// # Panics
/// If `n < 2`.
pub fn extremal_case_a(n: usize, c: f64) -> SymmetricTuple {
    assert!(n >= 2, "extremal_case_a needs n >= 2");
    let mut a1 = Matrix::zeros(n);
    a1[(0, 0)] = FRAC_1_SQRT_2;
    a1[(1, 1)] = -FRAC_1_SQRT_2;
    let mut a2 = Matrix::zeros(n);
    a2[(0, 1)] = c * FRAC_1_SQRT_2;
    a2[(1, 0)] = c * FRAC_1_SQRT_2;
    SymmetricTuple::new(vec![a1, a2]).expect("constructed symmetric")
}

/// `A_1 = λ · diag(n−1, −1, …, −1)` with `λ = 1/√(n(n−1))`, and for
/// `α = 2, …, n`, `A_α = μ · (E_1α + E_α1)`.
///
/// # Panics
/// If `n < 2`.
pub fn extremal_case_b(n: usize, mu: f64) -> SymmetricTuple {
    assert!(n >= 2, "extremal_case_b needs n >= 2");
    let lambda = 1.0 / ((n * (n - 1)) as f64).sqrt();
    let mut diag = vec![-lambda; n];
    diag[0] = (n - 1) as f64 * lambda;
    let mut members = vec![Matrix::from_diag(&diag)];
    for alpha in 1..n {
        let mut a = Matrix::zeros(n);
        a[(0, alpha)] = mu;
        a[(alpha, 0)] = mu;
        members.push(a);
    }
    SymmetricTuple::new(members).expect("constructed symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_a_matches_display() {
        let t = extremal_case_a(2, 1.0);
        assert_eq!(t.get(0), &Matrix::from_diag(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]));
        assert_eq!(
            t.get(1),
            &Matrix::from_rows(&[[0.0, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, 0.0]]).unwrap()
        );
        let padded = extremal_case_a(5, 1.0);
        assert_eq!(padded.get(0), &t.get(0).zero_pad(5));
        assert_eq!(padded.get(1), &t.get(1).zero_pad(5));
    }

    #[test]
    fn case_b_unit_first_member() {
        for n in 2..9 {
            let t = extremal_case_b(n, 0.3);
            assert_eq!(t.m(), n);
            assert!((t.get(0).norm_sq() - 1.0).abs() < 1e-14);
            assert!(t.get(0).trace().abs() < 1e-14);
        }
    }
}
