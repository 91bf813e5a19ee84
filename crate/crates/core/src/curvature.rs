//! Pointwise submanifold invariants from a second fundamental form.
//!
//! At a point of `Mⁿ ⊂ N^{n+m}(c)` the second fundamental form is one
//! symmetric `n × n` matrix `A^α = (h^α_ij)` per normal direction. The Gauss
//! and Ricci equations turn it into the normalized scalar curvature `ρ`, the
//! normal scalar curvature `ρ⊥` and the mean curvature `|H|²`, all evaluated
//! here by explicit index sums.

use serde::{Deserialize, Serialize};

use crate::ddvv::{group_act, SymmetricTuple};
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Matrix};

/// `h^α_ij` at a point, with the ambient curvature `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FormRepr", into = "FormRepr")]
pub struct SecondFundamentalForm {
    n: usize,
    c: f64,
    slices: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    n: usize,
    m: usize,
    c: f64,
    h: Vec<Vec<Vec<f64>>>,
}

impl TryFrom<FormRepr> for SecondFundamentalForm {
    type Error = Error;

    fn try_from(repr: FormRepr) -> Result<Self> {
        if repr.h.len() != repr.m {
            return Err(Error::Parse(format!(
                "h declares m = {} but has {} slices",
                repr.m,
                repr.h.len()
            )));
        }
        let slices = repr
            .h
            .iter()
            .map(|rows| {
                if rows.len() != repr.n {
                    return Err(Error::Parse(format!(
                        "slice has {} rows, expected n = {}",
                        rows.len(),
                        repr.n
                    )));
                }
                Matrix::from_rows(rows)
            })
            .collect::<Result<Vec<_>>>()?;
        SecondFundamentalForm::new(repr.n, repr.c, slices)
    }
}

impl From<SecondFundamentalForm> for FormRepr {
    fn from(h: SecondFundamentalForm) -> Self {
        FormRepr {
            n: h.n,
            m: h.slices.len(),
            c: h.c,
            h: h.slices.iter().map(Matrix::rows).collect(),
        }
    }
}

impl SecondFundamentalForm {
    pub fn new(n: usize, c: f64, slices: Vec<Matrix>) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFinite);
        }
        if slices.is_empty() {
            return Err(Error::InvalidInput("codimension must be at least 1".into()));
        }
        for s in &slices {
            if s.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: s.n(),
                });
            }
            s.require_symmetric()?;
        }
        Ok(SecondFundamentalForm { n, c, slices })
    }

    pub fn zeros(n: usize, m: usize, c: f64) -> Self {
        SecondFundamentalForm {
            n,
            c,
            slices: vec![Matrix::zeros(n); m],
        }
    }

    pub fn from_tuple(t: &SymmetricTuple, c: f64) -> Result<Self> {
        SecondFundamentalForm::new(t.n(), c, t.matrices().to_vec())
    }

    pub fn to_tuple(&self) -> SymmetricTuple {
        SymmetricTuple::new(self.slices.clone()).expect("slices are validated symmetric")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.slices.len()
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn slices(&self) -> &[Matrix] {
        &self.slices
    }

    /// `h^α_ij`
    #[inline]
    pub fn h(&self, alpha: usize, i: usize, j: usize) -> f64 {
        self.slices[alpha][(i, j)]
    }

    /// Rotates the tangent frame by `p ∈ O(n)` and the normal frame by
    /// `q ∈ O(m)`.
    pub fn change_frame(&self, p: &Matrix, q: &Matrix) -> Result<Self> {
        let t = group_act(&self.to_tuple(), p, q)?;
        SecondFundamentalForm::from_tuple(&t, self.c)
    }

    /// `‖σ‖² = Σ_α ‖A^α‖²`
    pub fn norm_sq(&self) -> f64 {
        self.slices.iter().map(Matrix::norm_sq).sum()
    }
}

/// `|H|² = Σ_α ((1/n) Σ_i h^α_ii)²`
pub fn mean_curvature_sq(h: &SecondFundamentalForm) -> f64 {
    let n = h.n as f64;
    h.slices
        .iter()
        .map(|a| {
            let mean = a.trace() / n;
            mean * mean
        })
        .sum()
}

/// Subtracts `(trace/n) · I` from every slice.
pub fn traceless(h: &SecondFundamentalForm) -> SecondFundamentalForm {
    let n = h.n;
    let slices = h
        .slices
        .iter()
        .map(|a| {
            let mean = a.trace() / n as f64;
            let mut out = a.clone();
            for i in 0..n {
                out[(i, i)] -= mean;
            }
            out
        })
        .collect();
    SecondFundamentalForm { n, c: h.c, slices }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub rho: f64,
    pub rho_perp: f64,
    pub mean_curv_sq: f64,
    /// `|H|² + c − ρ − ρ⊥`
    pub geometric_slack: f64,
    /// Left minus right side of the entrywise inequality on the traceless
    /// part.
    pub shape_slack: f64,
    pub tol: f64,
    pub holds: bool,
}

/// Normal curvature component `R⊥_{rs ij} = Σ_k (h^r_ik h^s_jk − h^s_ik h^r_jk)`.
fn normal_curvature(h: &SecondFundamentalForm, r: usize, s: usize, i: usize, j: usize) -> f64 {
    (0..h.n)
        .map(|k| h.h(r, i, k) * h.h(s, j, k) - h.h(s, i, k) * h.h(r, j, k))
        .sum()
}

/// `Σ_{i<j} Σ_{r<s} (R⊥_{rs ij})²`
fn normal_curvature_sq(h: &SecondFundamentalForm) -> f64 {
    let mut total = 0.0;
    for i in 0..h.n {
        for j in (i + 1)..h.n {
            for r in 0..h.m() {
                for s in (r + 1)..h.m() {
                    let v = normal_curvature(h, r, s, i, j);
                    total += v * v;
                }
            }
        }
    }
    total
}

/// Evaluates `ρ`, `ρ⊥`, `|H|²` and both forms of the DDVV slack.
///
/// `ρ = c + 2/(n(n−1)) Σ_{i<j} Σ_α (h^α_ii h^α_jj − (h^α_ij)²)` is the Gauss
/// equation with the sign fixed by `ρ = c` at `h = 0`.
pub fn curvature_report(h: &SecondFundamentalForm) -> Result<CurvatureReport> {
    let n = h.n;
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "scalar curvature needs n >= 2, got {n}"
        )));
    }
    let norm = 2.0 / (n * (n - 1)) as f64;

    let mut sectional = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            for alpha in 0..h.m() {
                sectional += h.h(alpha, i, i) * h.h(alpha, j, j) - h.h(alpha, i, j).powi(2);
            }
        }
    }
    let rho = h.c + norm * sectional;
    let rho_perp = norm * normal_curvature_sq(h).sqrt();
    let mean_curv_sq = mean_curvature_sq(h);
    let geometric_slack = mean_curv_sq + h.c - rho - rho_perp;

    let t = traceless(h);
    let mut diag_spread = 0.0;
    let mut offdiag = 0.0;
    for r in 0..t.m() {
        for i in 0..n {
            for j in (i + 1)..n {
                diag_spread += (t.h(r, i, i) - t.h(r, j, j)).powi(2);
                offdiag += t.h(r, i, j).powi(2);
            }
        }
    }
    let nf = n as f64;
    let shape_slack = diag_spread + 2.0 * nf * offdiag - 2.0 * nf * normal_curvature_sq(&t).sqrt();

    let tol = 1e-9 * (1.0 + rho.abs() + rho_perp + mean_curv_sq + h.c.abs());
    let shape_tol = tol * nf * nf * (nf - 1.0);
    Ok(CurvatureReport {
        rho,
        rho_perp,
        mean_curv_sq,
        geometric_slack,
        shape_slack,
        tol,
        holds: geometric_slack >= -tol && shape_slack >= -shape_tol,
    })
}

/// Ratio `shape_slack / geometric_slack`, which is `n²(n−1)` whenever the
/// geometric slack is nonzero.
pub fn slack_ratio(n: usize) -> f64 {
    let n = n as f64;
    n * n * (n - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalReport {
    /// Gram matrix `⟨A^α, A^β⟩`.
    pub s: Matrix,
    /// Eigenvalues of `s`, descending.
    pub eigenvalues: Vec<f64>,
    /// `‖σ‖² = trace(s)`
    pub sigma_sq: f64,
    /// `‖σ‖² + λ₂`, with `λ₂ = 0` when `m = 1`.
    pub pinch: f64,
    /// Whether `pinch ≤ n` (up to `1e-12` relative).
    pub within_pinching_bound: bool,
}

impl FundamentalReport {
    pub fn lambda2(&self) -> f64 {
        self.eigenvalues.get(1).copied().unwrap_or(0.0)
    }
}

pub fn fundamental_report(h: &SecondFundamentalForm) -> Result<FundamentalReport> {
    let s = h.to_tuple().gram();
    let eigenvalues = sym_eigen(&s)?.values;
    let sigma_sq = s.trace();
    let lambda2 = eigenvalues.get(1).copied().unwrap_or(0.0);
    let pinch = sigma_sq + lambda2;
    let bound = h.n as f64;
    Ok(FundamentalReport {
        s,
        eigenvalues,
        sigma_sq,
        pinch,
        within_pinching_bound: pinch <= bound * (1.0 + 1e-12),
    })
}

/// Second fundamental form of `S^r(√(r/n)) × S^{n−r}(√((n−r)/n)) ⊂ S^{n+1}`:
/// one diagonal slice with `r` entries `√((n−r)/r)` and `n−r` entries
/// `−√(r/(n−r))`, ambient `c = 1`.
pub fn clifford_model(r: usize, n: usize) -> Result<SecondFundamentalForm> {
    if r == 0 || r >= n {
        return Err(Error::InvalidInput(format!(
            "Clifford model needs 1 <= r <= n-1, got r = {r}, n = {n}"
        )));
    }
    let (rf, nf) = (r as f64, n as f64);
    let up = ((nf - rf) / rf).sqrt();
    let down = -(rf / (nf - rf)).sqrt();
    let diag: Vec<f64> = (0..n).map(|i| if i < r { up } else { down }).collect();
    SecondFundamentalForm::new(n, 1.0, vec![Matrix::from_diag(&diag)])
}

/// Second fundamental form of the Veronese surface in `S⁴` at a point:
/// `√(2/3)` times the two-spike pair, ambient `c = 1`.
pub fn veronese_tuple() -> SecondFundamentalForm {
    // √(2/3) · 1/√2 = 1/√3
    let a = 1.0 / 3f64.sqrt();
    let slices = vec![
        Matrix::from_diag(&[a, -a]),
        Matrix::from_rows(&[[0.0, a], [a, 0.0]]).expect("2x2"),
    ];
    SecondFundamentalForm::new(2, 1.0, slices).expect("symmetric")
}

/// The quadratic immersion of `S²(√3)` into the unit sphere of `ℝ⁵`.
pub fn veronese_immersion(p: [f64; 3]) -> Result<[f64; 5]> {
    let [x, y, z] = p;
    let r2 = x * x + y * y + z * z;
    if (r2 - 3.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!(
            "point must lie on the sphere of radius √3 (|p|² = {r2})"
        )));
    }
    let s3 = 3f64.sqrt();
    Ok([
        y * z / s3,
        z * x / s3,
        x * y / s3,
        (x * x - y * y) / (2.0 * s3),
        (x * x + y * y - 2.0 * z * z) / 6.0,
    ])
}
