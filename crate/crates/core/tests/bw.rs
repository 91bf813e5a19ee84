use ddvv_core::bw::*;
use ddvv_core::linalg::{commutator, sym_eigen, top_eigenpair};
use ddvv_core::rng::{gaussian_matrix, gaussian_symmetric, trial_rng};
use ddvv_core::Matrix;
use proptest::prelude::*;

fn unit(x: &Matrix) -> Matrix {
    x.scale(1.0 / x.norm())
}

#[test]
fn matrix_unit_pair_has_ratio_two() {
    let x = Matrix::unit(2, 0, 1);
    let y = Matrix::unit(2, 1, 0);
    let r = bw_slack(&x, &y).unwrap();
    assert!((r.lhs - 2.0).abs() < 1e-12 && r.slack.abs() < 1e-12);
    // embedded in larger dimensions
    for n in 3..=6 {
        let r = bw_slack(&Matrix::unit(n, 0, 1), &Matrix::unit(n, 1, 0)).unwrap();
        assert_eq!(r.lhs, 2.0);
    }
}

#[test]
fn commuting_pair_has_full_slack() {
    let x = Matrix::from_diag(&[1.0, 2.0, 3.0]);
    let y = Matrix::from_diag(&[-1.0, 0.5, 4.0]);
    let r = bw_slack(&x, &y).unwrap();
    assert_eq!(r.lhs, 0.0);
    assert_eq!(r.slack, r.rhs);
}

#[test]
fn case_matrix_for_matrix_units() {
    let b = Matrix::unit(2, 1, 0);
    let c = Matrix::unit(2, 0, 1);
    assert_eq!(bw_case_matrix(&b, &c), Matrix::from_diag(&[0.0, 2.0]));
    let r = bw_case_matrix_bound(&b, &c).unwrap();
    assert_eq!((r.lhs, r.rhs), (2.0, 2.0));
}

/// Case-matrix bound on extremal pairs produced by the search, with
/// `b_11 = 0` arranged by rotating inside the top eigenspace.
#[test]
fn case_analysis_at_search_optima() {
    for n in 2..=5 {
        for seed in 0..6 {
            let res = maximize_ratio(n, seed, 500).unwrap();
            assert!(res.converged, "n={n} seed={seed}");
            let a = bw_case_analysis(&res.x).unwrap();
            assert!(a.commutator_bound.holds);
            assert!(a.eigen_residual < 1e-8, "{}", a.eigen_residual);
            if let Some(case) = &a.case_matrix {
                assert!(a.b11.abs() < 1e-10, "b11 = {}", a.b11);
                assert!(case.holds, "{case:?}");
                assert!(a.tail_bound.as_ref().unwrap().holds);
            } else {
                assert!(a.small_case.as_ref().unwrap().holds);
            }
        }
    }
}

#[test]
fn search_trajectory_is_monotone_and_bounded() {
    for n in 2..=6 {
        let r = maximize_ratio(n, 3, 300).unwrap();
        assert!(r.trajectory.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{:?}", r.trajectory);
        assert!(r.best_ratio <= 2.0 + 1e-9);
        assert!((r.x.norm() - 1.0).abs() < 1e-12 && (r.y.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn search_with_no_iterations() {
    let r = maximize_ratio(4, 1, 0).unwrap();
    assert!(!r.converged);
    assert_eq!(r.trajectory.len(), 1);
    assert_eq!(r.best_ratio, r.trajectory[0]);
}

/// For diagonal `x`, negating the strict upper triangle of an eigenvector
/// gives another eigenvector for the same eigenvalue.
#[test]
fn diagonal_generator_upper_sign_flip() {
    let flip = |b: &Matrix| Matrix::from_fn(b.n(), |i, j| if i < j { -b[(i, j)] } else { b[(i, j)] });
    for seed in 0..20 {
        let mut rng = trial_rng(seed, 0);
        let n = 2 + seed as usize % 4;
        let d: Vec<f64> = (0..n).map(|_| ddvv_core::rng::normal(&mut rng)).collect();
        let t = t_operator(&Matrix::from_diag(&d)).unwrap();
        let b = gaussian_symmetric(&mut rng, n);
        assert!(t.apply(&flip(&b)).unwrap().max_abs_diff(&flip(&t.apply(&b).unwrap())) < 1e-12);

        let eig = sym_eigen(&t.matrix).unwrap();
        for k in 0..n * n {
            let v = unvec(n, &eig.vector(k));
            let fv = flip(&v);
            let residual = (&t.apply(&fv).unwrap() - &fv.scale(eig.values[k])).norm();
            assert!(residual < 1e-10, "seed {seed} k {k}: {residual}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn operator_is_symmetric_psd_and_bounded(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = trial_rng(seed, 0);
        let x = gaussian_matrix(&mut rng, n);
        let t = t_operator(&x).unwrap();
        prop_assert!(t.matrix.asymmetry() < 1e-12);
        let spec = t.spectrum().unwrap();
        prop_assert!(spec[0] <= 2.0 + 1e-9, "{}", spec[0]);
        prop_assert!(spec.iter().all(|l| *l >= -1e-12));
        if spec[0] > 1e-6 {
            prop_assert!((spec[0] - spec[1]) / spec[0] <= 1e-8, "{spec:?}");
        }
    }

    #[test]
    fn operator_matrix_matches_application(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = trial_rng(seed, 0);
        let x = gaussian_matrix(&mut rng, n);
        let y = gaussian_matrix(&mut rng, n);
        let t = t_operator(&x).unwrap();
        let direct = t.apply(&y).unwrap();
        let via_matrix = unvec(n, &t.matrix.mul_vec(&vec_of(&y)));
        prop_assert!(direct.max_abs_diff(&via_matrix) < 1e-12 * (1.0 + direct.norm()));
        // ⟨y, T y⟩ = ‖[x̂, y]‖²
        let quad = t.matrix.quadratic_form(&vec_of(&y));
        let comm = commutator(&unit(&x), &y).unwrap().norm_sq();
        prop_assert!((quad - comm).abs() < 1e-10 * (1.0 + comm));
    }

    #[test]
    fn bw_holds(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = trial_rng(seed, 0);
        let x = gaussian_matrix(&mut rng, n);
        let y = gaussian_matrix(&mut rng, n);
        prop_assert!(bw_slack(&x, &y).unwrap().holds);
        prop_assert!(bw_weak_slack(&x, &y).unwrap().holds);
    }

    #[test]
    fn bw_holds_for_symmetric_pairs(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = trial_rng(seed, 0);
        let x = gaussian_symmetric(&mut rng, n);
        let y = gaussian_symmetric(&mut rng, n);
        prop_assert!(bw_slack(&x, &y).unwrap().holds);
    }

    #[test]
    fn partner_is_a_second_eigenvector(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = trial_rng(seed, 0);
        let x = unit(&gaussian_matrix(&mut rng, n));
        let t = t_operator(&x).unwrap();
        let (alpha, v) = top_eigenpair(&t.matrix).unwrap();
        let y = unvec(n, &v);
        let p = partner_eigenvector(&x, &y).unwrap();
        prop_assert!((p.eigenvalue - alpha).abs() < 1e-9);
        prop_assert!(p.inner_with_y.abs() < 1e-9);
        prop_assert!(p.residual < 1e-7);
        prop_assert!((p.y1.norm_sq() - alpha).abs() < 1e-9 * (1.0 + alpha));
        prop_assert!(!p.vanishes);
    }

    #[test]
    fn svd_reduction_identity(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = trial_rng(seed, 0);
        let x = gaussian_matrix(&mut rng, n);
        let y = gaussian_matrix(&mut rng, n);
        let red = svd_reduction(&x, &y).unwrap();
        let lhs = commutator(&x, &y).unwrap().norm();
        let rhs = red.reduced_commutator().norm();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs));
        prop_assert!((red.b.norm() - y.norm()).abs() <= 1e-9 * y.norm());
        prop_assert!((red.c.norm() - y.norm()).abs() <= 1e-9 * y.norm());
    }

    #[test]
    fn small_s1_case(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = trial_rng(seed, 0);
        let x = gaussian_matrix(&mut rng, n);
        let y = gaussian_matrix(&mut rng, n);
        let s = sym_eigen(&(&x.transpose() * &x)).unwrap().values[0] / x.norm_sq();
        if s <= 0.5 {
            prop_assert!(small_s1_check(&x, &y).unwrap().holds);
        } else {
            prop_assert!(small_s1_check(&x, &y).is_err());
        }
    }

    #[test]
    fn case_matrix_bound_without_precondition_on_c(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = trial_rng(seed, 0);
        let mut b = gaussian_matrix(&mut rng, n);
        b[(0, 0)] = 0.0;
        let c = gaussian_matrix(&mut rng, n);
        prop_assert!(bw_case_matrix_bound(&b, &c).unwrap().holds);
    }

    #[test]
    fn case_analysis_on_random_x(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = trial_rng(seed, 0);
        let x = gaussian_matrix(&mut rng, n);
        let a = bw_case_analysis(&x).unwrap();
        prop_assert!(a.commutator_bound.holds);
        prop_assert!(a.eigen_residual < 1e-8);
        for r in [&a.small_case, &a.case_matrix, &a.tail_bound].into_iter().flatten() {
            prop_assert!(r.holds, "{:?}", r);
        }
    }
}
