//! Dense complex linear algebra: products, commutators, the matrix
//! exponential, LU-based determinants and inverses, and SVD nullspaces.

mod expm;
mod lu;
mod matrix;
mod svd;

use serde::{Deserialize, Serialize};

pub use expm::matrix_exponential;
pub use lu::{determinant, inverse, solve};
pub use matrix::{anticommutator, commutator, Matrix};
pub use svd::{nullspace_basis, phase_fix, svd, Svd};

/// Numerical tolerances used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Residuals of algebraic identities (commutators, reconstructions).
    pub algebraic: f64,
    /// Residuals involving matrix exponentials.
    pub exponential: f64,
    /// Relative singular-value cut for numerical rank.
    pub rank_cut: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            algebraic: 1e-10,
            exponential: 1e-9,
            rank_cut: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn is_valid(&self) -> bool {
        self.algebraic > 0.0 && self.exponential > 0.0 && self.rank_cut > 0.0 && self.rank_cut < 1.0
    }

    pub fn with_algebraic(mut self, algebraic: f64) -> Self {
        self.algebraic = algebraic;
        self
    }
}
