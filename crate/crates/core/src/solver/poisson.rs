//! Penalty-free lifted LDG discretization of `-lap u = f`, `u = 0` on the boundary.
//!
//! `<grad_0 u, grad_0 v> = <f, v>` with liftings of degree `k + 1`; no
//! penalty parameter appears anywhere.

use std::sync::Arc;

use super::gram::GramAssembler;
use crate::error::{Error, Result};
use crate::lifting::LiftedGradient;
use crate::linsolve::{gmres, GmresOptions, Ilu0, SolverReport, SparseMatrix};
use crate::mesh::{classify_boundary, CartesianMesh, FaceKind, Point, SideKinds};
use crate::space::{project_l2, DgFunction, DgSpace};

/// Stiffness matrix `G_0^T G_0` of the lifted Poisson problem.
pub fn poisson_matrix(space: &DgSpace) -> Result<SparseMatrix> {
    let target = DgSpace::new(space.mesh_arc().clone(), space.degree() + 1, 2);
    let kinds = classify_boundary(space.mesh(), SideKinds::uniform(FaceKind::Dirichlet));
    let g = LiftedGradient::new(space, &target, &kinds)?;
    let rpc = target.dofs_per_cell();
    Ok(GramAssembler::new(&g.matrix, rpc, &vec![1.0; rpc]).base().clone())
}

pub fn poisson_solve<F: Fn(Point) -> f64>(
    mesh: Arc<CartesianMesh>,
    degree: usize,
    f: F,
    rtol: f64,
) -> Result<(DgFunction, SolverReport)> {
    let space = DgSpace::new(mesh, degree, 1);
    let a = poisson_matrix(&space)?;
    let b = project_l2(&space, |x, _| f(x));
    let ilu = Ilu0::new(&a)?;
    let mut x = vec![0.0; space.dim()];
    let rep = gmres(&a, &b.coeffs, &mut x, &ilu, &GmresOptions { rtol, restart: 60, max_iter: 4000 });
    if !rep.converged {
        return Err(Error::NotConverged { what: "poisson", iterations: rep.iterations, residual: rep.residual });
    }
    Ok((DgFunction::from_coeffs(&space, x)?, rep))
}
