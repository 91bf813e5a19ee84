use ddvv_core::linalg::{commutator, frobenius_inner, sym_eigen, svd, vectorize_sym};
use ddvv_core::rng::{gaussian_matrix, gaussian_symmetric, trial_rng};
use ddvv_core::Matrix;
use proptest::prelude::*;

fn rel_err(a: &Matrix, b: &Matrix) -> f64 {
    a.max_abs_diff(b) / (1.0 + b.norm())
}

#[test]
fn eigen_roundtrip_campaign() {
    for k in 0..10_000u64 {
        let mut rng = trial_rng(11, k);
        let n = 1 + (k % 12) as usize;
        let a = gaussian_symmetric(&mut rng, n);
        let e = sym_eigen(&a).unwrap();
        assert!(rel_err(&e.reconstruct(), &a) < 1e-9, "trial {k}");
        assert!(e.vectors.orthogonality_defect() < 1e-9);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn svd_roundtrip_campaign() {
    for k in 0..10_000u64 {
        let mut rng = trial_rng(12, k);
        let n = 1 + (k % 12) as usize;
        let x = gaussian_matrix(&mut rng, n);
        let d = svd(&x).unwrap();
        assert!(rel_err(&d.reconstruct(), &x) < 1e-9, "trial {k}");
        assert!(d.q1.orthogonality_defect() < 1e-9);
        assert!(d.q2.orthogonality_defect() < 1e-9);
        assert!(d.lambda.iter().all(|s| *s >= 0.0));
    }
}

#[test]
fn svd_of_rank_deficient_matrix() {
    // rank one: u vᵀ
    let x = Matrix::from_fn(4, |i, j| (i as f64 + 1.0) * (j as f64 - 1.5));
    let d = svd(&x).unwrap();
    assert!(d.lambda[1..].iter().all(|s| *s < 1e-12));
    assert!(d.q1.orthogonality_defect() < 1e-12);
    assert!(rel_err(&d.reconstruct(), &x) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn cauchy_schwarz(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = trial_rng(seed, 0);
        let a = gaussian_matrix(&mut rng, n);
        let b = gaussian_matrix(&mut rng, n);
        let ab = frobenius_inner(&a, &b).unwrap();
        let aa = frobenius_inner(&a, &a).unwrap();
        let bb = frobenius_inner(&b, &b).unwrap();
        prop_assert!(aa * bb - ab * ab >= -1e-12 * (1.0 + aa * bb));
    }

    #[test]
    fn vectorization_halves_the_norm(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = trial_rng(seed, 0);
        let a = gaussian_symmetric(&mut rng, n);
        let v = vectorize_sym(&a).unwrap();
        prop_assert_eq!(v.len(), n * (n + 1) / 2);
        let sq: f64 = v.iter().map(|x| x * x).sum();
        prop_assert!((sq - 0.5 * a.norm_sq()).abs() <= 1e-12 * a.norm_sq());
    }

    #[test]
    fn commutator_is_antisymmetric(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = trial_rng(seed, 0);
        let a = gaussian_matrix(&mut rng, n);
        let b = gaussian_matrix(&mut rng, n);
        prop_assert_eq!(commutator(&a, &b).unwrap(), -&commutator(&b, &a).unwrap());
    }

    #[test]
    fn commutator_of_symmetric_pair_is_skew(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = trial_rng(seed, 0);
        let a = gaussian_symmetric(&mut rng, n);
        let b = gaussian_symmetric(&mut rng, n);
        let c = commutator(&a, &b).unwrap();
        prop_assert!((&c + &c.transpose()).max_abs() < 1e-12 * (1.0 + c.norm()));
    }
}
