//! Penalty-free local discontinuous Galerkin pressure-correction solver for
//! two-dimensional incompressible two-phase flow.
//!
//! The velocity lives in the broken space `V_{k+1}^2`, the pressure in `V_k`.
//! Derivatives are taken with lifted DG gradients and divergences whose jump
//! liftings live one polynomial degree higher than their argument, which is
//! what makes the discretization stable without penalty parameters. Phases are
//! tracked with a PLIC volume-of-fluid method, phase-dependent coefficients are
//! integrated with cut-cell quadratures and surface tension enters as a line
//! integral over the reconstructed interface.

pub mod benchmark;
pub mod error;
pub mod geom;
pub mod lifting;
pub mod linsolve;
pub mod mesh;
pub mod solver;
pub mod space;
pub mod verify;
pub mod vof;

pub use error::{Error, Result};
pub use mesh::{CartesianMesh, Face, FaceKind, Point, Side};
pub use space::{DgFunction, DgSpace};
