use ddvv_core::curvature::{
    clifford_model, curvature_report, fundamental_report, mean_curvature_sq, slack_ratio, traceless,
    veronese_immersion, veronese_tuple, SecondFundamentalForm,
};
use ddvv_core::ddvv::ddvv_slack;
use ddvv_core::rng::{gaussian_symmetric, gaussian_vec, random_orthogonal, trial_rng};
use ddvv_core::Matrix;
use proptest::prelude::*;

fn random_form(seed: u64, n: usize, m: usize, c: f64) -> SecondFundamentalForm {
    let mut rng = trial_rng(seed, 0);
    let slices = (0..m).map(|_| gaussian_symmetric(&mut rng, n)).collect();
    SecondFundamentalForm::new(n, c, slices).unwrap()
}

/// Full Gauss-equation curvature tensor, `R_ijkl = c(δ_il δ_jk − δ_ik δ_jl) +
/// Σ_α (h_il h_jk − h_ik h_jl)`, and `ρ = Σ_{i≠j} R_ijji / (n(n−1))`.
fn oracle_rho(h: &SecondFundamentalForm) -> f64 {
    let n = h.n();
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let riemann = |i, j, k, l| {
        let mut v = h.c() * (delta(i, l) * delta(j, k) - delta(i, k) * delta(j, l));
        for a in 0..h.m() {
            v += h.h(a, i, l) * h.h(a, j, k) - h.h(a, i, k) * h.h(a, j, l);
        }
        v
    };
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += riemann(i, j, j, i);
            }
        }
    }
    total / (n * (n - 1)) as f64
}

/// `ρ⊥ = sqrt(Σ_{i<j} Σ_{r<s} (R⊥_rsij)²) · 2/(n(n−1))` with the normal
/// curvature built from matrix products `(A_r A_s − A_s A_r)_ij`.
fn oracle_rho_perp(h: &SecondFundamentalForm) -> f64 {
    let n = h.n();
    let mut total = 0.0;
    for r in 0..h.m() {
        for s in (r + 1)..h.m() {
            let a = &h.slices()[r];
            let b = &h.slices()[s];
            let comm = &(a * b) - &(b * a);
            for i in 0..n {
                for j in (i + 1)..n {
                    total += comm[(i, j)].powi(2);
                }
            }
        }
    }
    2.0 / (n * (n - 1)) as f64 * total.sqrt()
}

#[test]
fn report_matches_tensor_oracle() {
    for seed in 0..200 {
        let n = 2 + (seed as usize % 5);
        let m = 1 + (seed as usize / 5 % 5);
        let c = [-1.0, 0.0, 1.0][seed as usize % 3];
        let h = random_form(seed, n, m, c);
        let r = curvature_report(&h).unwrap();
        let scale = 1.0 + h.norm_sq();
        assert!((r.rho - oracle_rho(&h)).abs() < 1e-12 * scale, "seed {seed}");
        assert!((r.rho_perp - oracle_rho_perp(&h)).abs() < 1e-12 * scale, "seed {seed}");
    }
}

#[test]
fn zero_form_is_totally_geodesic() {
    for c in [-1.0, 0.0, 0.5, 1.0] {
        let h = SecondFundamentalForm::zeros(4, 3, c);
        let r = curvature_report(&h).unwrap();
        assert_eq!(r.rho, c);
        assert_eq!(r.rho_perp, 0.0);
        assert_eq!(r.geometric_slack, 0.0);
        assert_eq!(r.shape_slack, 0.0);
        assert_eq!(fundamental_report(&h).unwrap().pinch, 0.0);
    }
}

#[test]
fn umbilic_forms_have_zero_slack() {
    for (n, t) in [(2, 0.7), (3, -1.5), (5, 2.0)] {
        let h = SecondFundamentalForm::new(n, 1.0, vec![Matrix::identity(n).scale(t), Matrix::zeros(n)]).unwrap();
        assert!((mean_curvature_sq(&h) - t * t).abs() < 1e-15);
        let r = curvature_report(&h).unwrap();
        assert!(r.geometric_slack.abs() < 1e-12, "{r:?}");
        assert!(r.shape_slack.abs() < 1e-12);
    }
}

#[test]
fn veronese_values() {
    let h = veronese_tuple();
    let r = curvature_report(&h).unwrap();
    assert!((r.rho - 1.0 / 3.0).abs() < 1e-15, "{}", r.rho);
    assert!((r.rho_perp - 2.0 / 3.0).abs() < 1e-15, "{}", r.rho_perp);
    assert_eq!(r.mean_curv_sq, 0.0);
    assert!(r.geometric_slack.abs() < 1e-15);
    assert!(r.shape_slack.abs() < 1e-14);
    assert!((r.rho + r.rho_perp - 1.0).abs() < 1e-15);

    let f = fundamental_report(&h).unwrap();
    assert!((f.sigma_sq - 4.0 / 3.0).abs() < 1e-15);
    assert!(f.s.max_abs_diff(&Matrix::from_diag(&[2.0 / 3.0, 2.0 / 3.0])) < 1e-15);
    assert!((f.pinch - 2.0).abs() < 1e-15);
    assert!(f.within_pinching_bound);

    assert!(ddvv_slack(&h.to_tuple()).slack.abs() < 1e-15);
}

#[test]
fn clifford_models_sit_on_the_pinching_boundary() {
    for n in 2..=8 {
        for r in 1..n {
            let h = clifford_model(r, n).unwrap();
            assert!(h.slices()[0].trace().abs() < 1e-12);
            assert!(mean_curvature_sq(&h) < 1e-24);
            let f = fundamental_report(&h).unwrap();
            assert!((f.sigma_sq - n as f64).abs() < 1e-12, "r={r} n={n}");
            assert_eq!(f.lambda2(), 0.0);
            assert!((f.pinch - n as f64).abs() < 1e-12);
            // hypersurface: no normal curvature, ρ = 1 − n/(n(n−1))
            let c = curvature_report(&h).unwrap();
            assert_eq!(c.rho_perp, 0.0);
            assert!((c.geometric_slack - 1.0 / (n as f64 - 1.0)).abs() < 1e-12);
        }
    }
}

/// Brute-force determination of `shape_slack / geometric_slack`.
#[test]
fn slack_ratio_is_n_squared_times_n_minus_one() {
    for n in 2..=6 {
        let mut ratios = Vec::new();
        for seed in 0..40 {
            let m = 1 + seed as usize % 4;
            let h = random_form(1000 + seed, n, m, 0.3);
            let r = curvature_report(&h).unwrap();
            assert!(r.geometric_slack > 1e-6);
            ratios.push(r.shape_slack / r.geometric_slack);
        }
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(hi - lo < 1e-9 * hi, "n = {n}: ratios span [{lo}, {hi}]");
        assert!((lo - slack_ratio(n)).abs() < 1e-9 * lo, "n = {n}: {lo}");
    }
    assert_eq!([2, 3, 4].map(slack_ratio), [4.0, 18.0, 48.0]);
}

#[test]
fn veronese_immersion_examples() {
    let s3 = 3f64.sqrt();
    let u = veronese_immersion([s3, 0.0, 0.0]).unwrap();
    assert!((u.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-15);
    assert!(veronese_immersion([0.0, 0.0, 1.0]).is_err());
}

#[test]
fn curvature_rejects_curves() {
    let h = SecondFundamentalForm::new(1, 0.0, vec![Matrix::identity(1)]).unwrap();
    assert!(curvature_report(&h).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn slacks_nonnegative_and_coupled(seed in any::<u64>(), n in 2usize..=6, m in 1usize..=6, ci in 0usize..3) {
        let h = random_form(seed, n, m, [-1.0, 0.0, 1.0][ci]);
        let r = curvature_report(&h).unwrap();
        prop_assert!(r.rho_perp >= 0.0);
        prop_assert!(r.holds, "{:?}", r);
        let scale = 1.0 + h.norm_sq();
        prop_assert!((r.shape_slack - slack_ratio(n) * r.geometric_slack).abs() < 1e-9 * scale * slack_ratio(n));
    }

    #[test]
    fn traceless_kills_mean_curvature(seed in any::<u64>(), n in 2usize..=6, m in 1usize..=4) {
        let h = random_form(seed, n, m, 1.0);
        let t = traceless(&h);
        prop_assert!(mean_curvature_sq(&t) < 1e-24 * (1.0 + h.norm_sq()));
        let a = curvature_report(&h).unwrap().rho_perp;
        let b = curvature_report(&t).unwrap().rho_perp;
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a));
    }

    #[test]
    fn fundamental_matrix_bounds(seed in any::<u64>(), n in 2usize..=6, m in 1usize..=6) {
        let h = random_form(seed, n, m, 1.0);
        let f = fundamental_report(&h).unwrap();
        let sum: f64 = f.eigenvalues.iter().sum();
        prop_assert!((sum - f.sigma_sq).abs() <= 1e-10 * (1.0 + f.sigma_sq));
        prop_assert!(f.eigenvalues.iter().all(|l| *l >= -1e-10 * (1.0 + f.sigma_sq)));
        prop_assert!(f.lambda2() <= 0.5 * f.sigma_sq + 1e-10 * (1.0 + f.sigma_sq));
    }

    #[test]
    fn frame_invariance(seed in any::<u64>(), n in 2usize..=5, m in 1usize..=4) {
        let h = random_form(seed, n, m, -1.0);
        let mut rng = trial_rng(seed, 1);
        let p = random_orthogonal(&mut rng, n);
        let q = random_orthogonal(&mut rng, m);
        let a = curvature_report(&h).unwrap();
        let b = curvature_report(&h.change_frame(&p, &q).unwrap()).unwrap();
        for (x, y) in [(a.rho, b.rho), (a.rho_perp, b.rho_perp), (a.mean_curv_sq, b.mean_curv_sq), (a.geometric_slack, b.geometric_slack)] {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()), "{x} vs {y}");
        }
    }

    #[test]
    fn veronese_immersion_is_unit_and_even(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let v = gaussian_vec(&mut rng, 3);
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(r > 1e-6);
        let p = [0, 1, 2].map(|i| v[i] * 3f64.sqrt() / r);
        let u = veronese_immersion(p).unwrap();
        prop_assert!((u.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert_eq!(veronese_immersion(p.map(|x| -x)).unwrap(), u);
    }
}
