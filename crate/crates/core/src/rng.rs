//! Seeded random inputs for campaigns.
//!
//! Trial `k` of a campaign with master seed `s` draws from its own stream
//! seeded with `s ^ k`, so a trial's input does not depend on which worker
//! runs it or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::Matrix;

pub type TrialRng = ChaCha8Rng;

pub fn trial_seed(master: u64, trial: u64) -> u64 {
    master ^ trial
}

pub fn trial_rng(master: u64, trial: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, trial))
}

pub fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_vec(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| normal(rng)).collect()
}

/// Matrix with independent standard normal entries.
pub fn gaussian_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    Matrix::from_fn(n, |_, _| normal(rng))
}

/// `(M + Mᵀ)/2` for a Gaussian `M`.
pub fn gaussian_symmetric(rng: &mut impl Rng, n: usize) -> Matrix {
    let m = gaussian_matrix(rng, n);
    Matrix::from_fn(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

/// Haar-ish random orthogonal matrix: eigenvectors of a Gaussian symmetric
/// matrix.
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> Matrix {
    let s = gaussian_symmetric(rng, n);
    crate::linalg::sym_eigen(&s)
        .expect("Gaussian symmetric matrices are symmetric and finite")
        .vectors
}

/// Entrywise nonnegative vector (absolute Gaussian).
pub fn nonnegative_vec(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| normal(rng).abs()).collect()
}
