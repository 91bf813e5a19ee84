//! The Böttcher–Wenzel bound `‖[X, Y]‖² ≤ 2‖X‖²‖Y‖²` for arbitrary real
//! square matrices.
//!
//! For unit `X` the bound is the statement `λ_max(T) ≤ 2` for the symmetric
//! positive semidefinite operator `T(Y) = [Xᵀ, [X, Y]]`, since
//! `⟨Y, T Y⟩ = ‖[X, Y]‖²`. Matrices of `T` use row-major flattening of `Y`:
//! `vec(Y)[i·n + j] = y_ij`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{commutator, frobenius_inner, svd, sym_eigen, Matrix};
use crate::report::SlackReport;
use crate::rng::{gaussian_matrix, trial_rng};

/// The operator `Y ↦ [Xᵀ, [X, Y]]` for a unit-norm `X`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TOperator {
    pub n: usize,
    /// The generator, rescaled to unit Frobenius norm.
    pub x: Matrix,
    /// `n² × n²` matrix acting on row-major `vec(Y)`.
    pub matrix: Matrix,
}

impl TOperator {
    /// `[Xᵀ, [X, Y]]` evaluated directly.
    pub fn apply(&self, y: &Matrix) -> Result<Matrix> {
        apply_t(&self.x, y)
    }

    /// Eigenvalues of the operator, descending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(sym_eigen(&self.matrix)?.values)
    }
}

fn apply_t(x: &Matrix, y: &Matrix) -> Result<Matrix> {
    commutator(&x.transpose(), &commutator(x, y)?)
}

/// Row-major flattening.
pub fn vec_of(y: &Matrix) -> Vec<f64> {
    y.as_slice().to_vec()
}

/// Inverse of [`vec_of`].
pub fn unvec(n: usize, v: &[f64]) -> Matrix {
    Matrix::from_fn(n, |i, j| v[i * n + j])
}

fn unit(x: &Matrix, what: &str) -> Result<Matrix> {
    let norm = x.norm();
    if norm == 0.0 {
        return Err(Error::InvalidInput(format!("{what} must be nonzero")));
    }
    Ok(x.scale(1.0 / norm))
}

/// Builds `T` for `x / ‖x‖`, one column per basis matrix `E_ij`.
pub fn t_operator(x: &Matrix) -> Result<TOperator> {
    let n = x.n();
    let x = unit(x, "generator X")?;
    let dim = n * n;
    let mut matrix = Matrix::zeros(dim);
    for i in 0..n {
        for j in 0..n {
            let col = apply_t(&x, &Matrix::unit(n, i, j))?;
            let c = i * n + j;
            for (r, v) in col.as_slice().iter().enumerate() {
                matrix[(r, c)] = *v;
            }
        }
    }
    Ok(TOperator { n, x, matrix })
}

/// `λ_max(T) ≤ 2` for the operator of `x / ‖x‖`.
pub fn bw_spectral_slack(x: &Matrix) -> Result<SlackReport> {
    let t = t_operator(x)?;
    let top = sym_eigen(&t.matrix)?.max_value();
    Ok(SlackReport::upper_bound("bw_spectral", top, 2.0))
}

/// Largest and second largest eigenvalue of `T`.
pub fn top_two_eigenvalues(x: &Matrix) -> Result<(f64, f64)> {
    let values = t_operator(x)?.spectrum()?;
    Ok((values[0], values.get(1).copied().unwrap_or(0.0)))
}

/// `‖[x, y]‖² ≤ 2‖x‖²‖y‖²`.
pub fn bw_slack(x: &Matrix, y: &Matrix) -> Result<SlackReport> {
    Ok(SlackReport::upper_bound(
        "bw",
        commutator(x, y)?.norm_sq(),
        2.0 * x.norm_sq() * y.norm_sq(),
    ))
}

/// The older constant: `‖[x, y]‖² ≤ 3‖x‖²‖y‖²`.
pub fn bw_weak_slack(x: &Matrix, y: &Matrix) -> Result<SlackReport> {
    Ok(SlackReport::upper_bound(
        "bw_weak",
        commutator(x, y)?.norm_sq(),
        3.0 * x.norm_sq() * y.norm_sq(),
    ))
}

/// Second eigenvector paired with an eigenvector `y` of `T`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartnerEigenvector {
    /// `[xᵀ, yᵀ]` with `x` and `y` at unit norm.
    pub y1: Matrix,
    pub eigenvalue: f64,
    /// `⟨y, y1⟩`, zero in exact arithmetic.
    pub inner_with_y: f64,
    /// `‖T y1 − α y1‖`.
    pub residual: f64,
    /// Set when `[x, y] = 0`, so the partner vanishes (only for `α = 0`).
    pub vanishes: bool,
}

/// Residual tolerance for accepting `y` as an eigenvector of `T`.
pub const EIGENVECTOR_RESIDUAL_TOL: f64 = 1e-8;

/// Returns `y1 = [xᵀ, yᵀ]`, which is an eigenvector of `T` for the same
/// eigenvalue as `y` and orthogonal to it.
///
/// `x` and `y` are rescaled to unit norm first.
pub fn partner_eigenvector(x: &Matrix, y: &Matrix) -> Result<PartnerEigenvector> {
    x.check_same_dim(y)?;
    let x = unit(x, "X")?;
    let y = unit(y, "Y")?;
    let ty = apply_t(&x, &y)?;
    let alpha = frobenius_inner(&y, &ty)?;
    let residual_in = (&ty - &y.scale(alpha)).norm();
    if residual_in > EIGENVECTOR_RESIDUAL_TOL * (1.0 + alpha.abs()) {
        return Err(Error::Precondition(format!(
            "Y is not an eigenvector of T (residual {residual_in:e} at Rayleigh quotient {alpha})"
        )));
    }

    let y1 = commutator(&x.transpose(), &y.transpose())?;
    let inner_with_y = frobenius_inner(&y, &y1)?;
    let residual = (&apply_t(&x, &y1)? - &y1.scale(alpha)).norm();
    let scale = 1.0 + y1.norm();
    if inner_with_y.abs() > 1e-8 * scale {
        return Err(Error::Precondition(format!(
            "partner is not orthogonal to Y (⟨Y, Y1⟩ = {inner_with_y:e})"
        )));
    }
    if residual > 1e-7 * scale {
        return Err(Error::Precondition(format!(
            "partner is not an eigenvector (residual {residual:e})"
        )));
    }
    let vanishes = y1.norm() <= 1e-12;
    Ok(PartnerEigenvector {
        y1,
        eigenvalue: alpha,
        inner_with_y,
        residual,
        vanishes,
    })
}

/// `X = Q₁ Λ Q₂` with `B = Q₂ Y Q₂ᵀ` and `C = Q₁ᵀ Y Q₁`, so that
/// `‖[X, Y]‖ = ‖Λ B − C Λ‖`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SvdReduction {
    pub lambda: Vec<f64>,
    pub b: Matrix,
    pub c: Matrix,
}

impl SvdReduction {
    /// `Λ B − C Λ`
    pub fn reduced_commutator(&self) -> Matrix {
        let l = Matrix::from_diag(&self.lambda);
        &(&l * &self.b) - &(&self.c * &l)
    }
}

pub fn svd_reduction(x: &Matrix, y: &Matrix) -> Result<SvdReduction> {
    x.check_same_dim(y)?;
    let d = svd(x)?;
    let b = &(&d.q2 * y) * &d.q2.transpose();
    let c = &(&d.q1.transpose() * y) * &d.q1;
    Ok(SvdReduction {
        lambda: d.lambda,
        b,
        c,
    })
}

/// The case `s₁² ≤ ½` of the proof, for unit `x`:
/// `‖Λ B − C Λ‖² ≤ 2‖Y‖²`.
pub fn small_s1_check(x: &Matrix, y: &Matrix) -> Result<SlackReport> {
    x.check_same_dim(y)?;
    let x = unit(x, "X")?;
    let red = svd_reduction(&x, y)?;
    let s1_sq = red.lambda[0] * red.lambda[0];
    if s1_sq > 0.5 + 1e-12 {
        return Err(Error::Precondition(format!(
            "top singular value squared is {s1_sq} > 1/2; use bw_slack for this X"
        )));
    }
    Ok(SlackReport::upper_bound(
        "small_s1",
        red.reduced_commutator().norm_sq(),
        2.0 * y.norm_sq(),
    ))
}

/// The arrow matrix of the `s₁² > ½` case: corner
/// `Δ = Σ_{i≥2} b_1i² + Σ_{j≥2} c_j1² + c_11²`, diagonal `b_i1² + c_1i²`,
/// first row and column `−b_1i c_1i − b_i1 c_i1`.
pub fn bw_case_matrix(b: &Matrix, c: &Matrix) -> Matrix {
    let n = b.n();
    let mut p = Matrix::zeros(n);
    let mut delta = c[(0, 0)] * c[(0, 0)];
    for i in 1..n {
        delta += b[(0, i)] * b[(0, i)] + c[(i, 0)] * c[(i, 0)];
        let off = -b[(0, i)] * c[(0, i)] - b[(i, 0)] * c[(i, 0)];
        p[(0, i)] = off;
        p[(i, 0)] = off;
        p[(i, i)] = b[(i, 0)] * b[(i, 0)] + c[(0, i)] * c[(0, i)];
    }
    p[(0, 0)] = delta;
    p
}

/// `λ_max(P) ≤ Δ + Σ_{i≥2} b_i1² + Σ_{j≥2} c_1j²` for the
/// [`bw_case_matrix`] of `(b, c)` with `b_11 = 0`.
pub fn bw_case_matrix_bound(b: &Matrix, c: &Matrix) -> Result<SlackReport> {
    b.check_same_dim(c)?;
    let n = b.n();
    if n < 2 {
        return Err(Error::InvalidInput("case matrix needs n >= 2".into()));
    }
    if b[(0, 0)].abs() > 1e-12 * (1.0 + b.norm()) {
        return Err(Error::Precondition(format!("b_11 = {:e}, expected 0", b[(0, 0)])));
    }
    let p = bw_case_matrix(b, c);
    let lambda_max = sym_eigen(&p)?.max_value();
    let rhs = p[(0, 0)] + (1..n).map(|i| b[(i, 0)] * b[(i, 0)] + c[(0, i)] * c[(0, i)]).sum::<f64>();
    Ok(SlackReport::upper_bound("bw_case_matrix", lambda_max, rhs))
}

/// Instrumented run of the case analysis for one `X`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseAnalysis {
    /// `s₁²` of the unit-normalized `X`.
    pub s1_sq: f64,
    pub top_eigenvalue: f64,
    /// The eigenvector used, unit norm, with `b_11 = 0` in the large case.
    pub y: Matrix,
    /// `‖T y − α y‖`
    pub eigen_residual: f64,
    /// `b_11` of the chosen `y` (large case) or of the top eigenvector.
    pub b11: f64,
    /// `‖[X, Y]‖² ≤ 2` for the chosen eigenvector.
    pub commutator_bound: SlackReport,
    /// The `s₁² ≤ ½` chain, when that case applies.
    pub small_case: Option<SlackReport>,
    /// The arrow-matrix bound, when `s₁² > ½`.
    pub case_matrix: Option<SlackReport>,
    /// `Δ₁ ≤ Σ_{i,j≥2} (b_ij² + c_ij²)`, when `s₁² > ½`.
    pub tail_bound: Option<SlackReport>,
}

/// Runs the case split for `X`: picks a unit top eigenvector of `T`, rotated
/// within the span of it and its partner so that `b_11 = 0`, and evaluates
/// the bounds of whichever case applies.
pub fn bw_case_analysis(x: &Matrix) -> Result<CaseAnalysis> {
    let n = x.n();
    let x = unit(x, "X")?;
    let t = t_operator(&x)?;
    let eig = sym_eigen(&t.matrix)?;
    let alpha = eig.max_value();
    let y0 = unvec(n, &eig.vector(0));
    let d = svd(&x)?;
    let s1_sq = d.lambda[0] * d.lambda[0];
    let row0: Vec<f64> = (0..n).map(|j| d.q2[(0, j)]).collect();
    let b11_of = |y: &Matrix| y.quadratic_form(&row0);

    let y = if s1_sq > 0.5 && alpha > 1e-12 {
        let partner = partner_eigenvector(&x, &y0)?;
        let y1 = unit(&partner.y1, "partner")?;
        let (beta0, beta1) = (b11_of(&y0), b11_of(&y1));
        let theta = (-beta0).atan2(beta1);
        let y = &y0.scale(theta.cos()) + &y1.scale(theta.sin());
        unit(&y, "rotated eigenvector")?
    } else {
        y0
    };

    let ty = t.apply(&y)?;
    let eigen_residual = (&ty - &y.scale(alpha)).norm();
    let red = svd_reduction(&x, &y)?;
    let commutator_bound = SlackReport::upper_bound("bw_eigenvector", commutator(&x, &y)?.norm_sq(), 2.0);

    let (small_case, case_matrix, tail_bound) = if s1_sq <= 0.5 {
        (Some(small_s1_check(&x, &y)?), None, None)
    } else {
        let mut b = red.b.clone();
        // b_11 vanishes up to rounding; the bound is stated for the exact zero.
        let b11 = b[(0, 0)];
        if b11.abs() <= 1e-10 {
            b[(0, 0)] = 0.0;
        }
        let case = bw_case_matrix_bound(&b, &red.c)?;
        let s = &red.lambda;
        let mut delta1 = 0.0;
        let mut tail = 0.0;
        for i in 1..n {
            for j in 1..n {
                let v = s[i] * red.b[(i, j)] - s[j] * red.c[(i, j)];
                delta1 += v * v;
                tail += red.b[(i, j)].powi(2) + red.c[(i, j)].powi(2);
            }
        }
        (None, Some(case), Some(SlackReport::upper_bound("bw_tail", delta1, tail)))
    };

    Ok(CaseAnalysis {
        s1_sq,
        top_eigenvalue: alpha,
        b11: red.b[(0, 0)],
        y,
        eigen_residual,
        commutator_bound,
        small_case,
        case_matrix,
        tail_bound,
    })
}

/// Result of the alternating search for the largest `‖[X, Y]‖²` over unit
/// `X`, `Y`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioSearchResult {
    pub best_ratio: f64,
    pub x: Matrix,
    pub y: Matrix,
    /// Completed alternating rounds (one `Y` update and one `X` update each).
    pub iterations: usize,
    pub converged: bool,
    /// Ratio at the start and after every half-step.
    pub trajectory: Vec<f64>,
    /// Reseeds forced by a starting `X` whose operator vanishes.
    pub restarts: usize,
}

/// Stop once a full round improves the ratio by less than this.
pub const RATIO_IMPROVEMENT_TOL: f64 = 1e-12;
const MAX_RESTARTS: usize = 10;
const DEGENERATE_OPERATOR: f64 = 1e-12;

/// Alternating exact maximization from Gaussian starting points drawn from
/// `seed`.
pub fn maximize_ratio(n: usize, seed: u64, max_iters: usize) -> Result<RatioSearchResult> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("ratio search needs n >= 2, got {n}")));
    }
    let mut rng = trial_rng(seed, 0);
    let x0 = gaussian_matrix(&mut rng, n);
    let y0 = gaussian_matrix(&mut rng, n);
    maximize_ratio_from(&x0, &y0, seed, max_iters)
}

/// Alternating exact maximization of `‖[x, y]‖²` on the unit spheres.
///
/// With `x` fixed, `y` becomes the top eigenvector of `T_x`; with `y` fixed,
/// `x` becomes the top eigenvector of `T_y` (valid since
/// `‖[x, y]‖ = ‖[y, x]‖`). Each half-step maximizes exactly, so the
/// trajectory is nondecreasing. A starting `x` with `λ_max(T_x) < 1e-12`
/// (a multiple of the identity) is replaced by a Gaussian draw from `seed`,
/// at most 10 times.
pub fn maximize_ratio_from(
    x0: &Matrix,
    y0: &Matrix,
    seed: u64,
    max_iters: usize,
) -> Result<RatioSearchResult> {
    x0.check_same_dim(y0)?;
    let n = x0.n();
    let mut rng = trial_rng(seed, 1);
    let mut x = unit(x0, "starting X")?;
    let mut y = unit(y0, "starting Y")?;
    let mut ratio = commutator(&x, &y)?.norm_sq();
    let mut trajectory = vec![ratio];
    let mut restarts = 0;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iters {
        let (alpha, v) = crate::linalg::top_eigenpair(&t_operator(&x)?.matrix)?;
        if alpha < DEGENERATE_OPERATOR {
            if restarts == MAX_RESTARTS {
                break;
            }
            restarts += 1;
            x = unit(&gaussian_matrix(&mut rng, n), "reseeded X")?;
            ratio = commutator(&x, &y)?.norm_sq();
            trajectory = vec![ratio];
            continue;
        }
        y = unvec(n, &v);
        trajectory.push(alpha);

        let (beta, w) = crate::linalg::top_eigenpair(&t_operator(&y)?.matrix)?;
        x = unvec(n, &w);
        trajectory.push(beta);
        iterations += 1;

        let improvement = beta - ratio;
        ratio = beta;
        if improvement < RATIO_IMPROVEMENT_TOL {
            converged = true;
            break;
        }
    }

    Ok(RatioSearchResult {
        best_ratio: commutator(&x, &y)?.norm_sq(),
        x,
        y,
        iterations,
        converged,
        trajectory,
        restarts,
    })
}
