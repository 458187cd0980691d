//! Sparse storage and Krylov solvers for the implicit substeps.

pub mod coarse;
pub mod gmres;
pub mod ilu;
pub mod sparse;

pub use coarse::{CoarseCorrection, CoarseVector};
pub use gmres::{gmres, GmresOptions};
pub use ilu::Ilu0;
pub use sparse::{LinearOperator, SparseMatrix};

/// Outcome of an iterative solve. `residual` is `||b - A x|| / ||b||`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverReport {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

pub trait Preconditioner {
    /// `z = M^{-1} r`
    fn apply(&self, r: &[f64], z: &mut [f64]);
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityPreconditioner;

impl Preconditioner for IdentityPreconditioner {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
    }
}
