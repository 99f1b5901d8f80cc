//! Dense complex linear algebra: matrix construction, Kronecker products,
//! Hermitian eigendecomposition, expectation values.
//!
//! Self-contained on purpose.  The solver is the classic pair of Householder
//! tridiagonalization plus implicit-shift QL iteration, which is deterministic
//! and entirely adequate for the dimensions this crate targets (up to 4096).

mod eigen;
mod matrix;

pub use eigen::{check_state, eigenvalues, eigh, expectation, EigenDecomposition};
pub use matrix::{kron, ComplexMatrix, C64};

use thiserror::Error;

/// Hermiticity acceptance: max |M[i][j] - conj(M[j][i])| relative to 1 + max|M|.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenpair residual budget, relative to the Frobenius norm.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Eigenvector orthonormality budget (max entry of V†V - I).
pub const ORTHO_TOL: f64 = 1e-10;
/// Trace/positivity slack accepted when an input must be a density operator.
pub const STATE_TOL: f64 = 1e-9;
/// QL iteration cap, per eigenvalue.
pub const MAX_SWEEPS: usize = 50;

#[derive(Debug, Error)]
pub enum NumError {
    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("QL iteration exceeded {MAX_SWEEPS} sweeps on eigenvalue {index}")]
    NoConvergence { index: usize },
    #[error("dimension mismatch: {a_rows}x{a_cols} vs {b_rows}x{b_cols}")]
    DimensionMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },
    #[error("not a density operator: {0}")]
    NotAState(String),
}
