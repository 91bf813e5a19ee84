//! Numerical laboratory for commutator inequalities of real matrices.
//!
//! The crate checks the normal scalar curvature (DDVV) inequality
//! `(Σ‖A_r‖²)² ≥ 2 Σ_{r<s} ‖[A_r, A_s]‖²` for tuples of symmetric matrices,
//! the Böttcher–Wenzel bound `‖[X, Y]‖² ≤ 2‖X‖²‖Y‖²` for arbitrary square
//! matrices, the supporting lemmas, and the pointwise submanifold invariants
//! (scalar curvature, normal scalar curvature, fundamental matrix) that the
//! inequalities describe.
//!
//! Everything is dense `f64` linear algebra on small matrices. Seeded random
//! campaigns live in [`campaign`] and fan out over rayon when the `parallel`
//! feature is enabled.

pub mod bw;
pub mod campaign;
pub mod curvature;
pub mod ddvv;
pub mod error;
pub mod io;
pub mod linalg;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
pub use linalg::{EigenDecomposition, Matrix, SingularDecomposition};
pub use report::SlackReport;

/// Version string embedded in campaign summaries.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
