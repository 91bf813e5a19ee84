//! Dense small-matrix numerics.

mod eigen;
mod matrix;
mod svd;
mod vectorize;

pub use eigen::{sym_eigen, top_eigenpair, EigenDecomposition};
pub use matrix::{commutator, commutator_norm_sq, frobenius_inner, Matrix, SYMMETRY_TOL};
pub use svd::{svd, SingularDecomposition};
pub use vectorize::{offdiag_slot, vectorize_sym};
