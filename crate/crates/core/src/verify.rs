//! Property checks shared by the `verify` command and the acceptance suite.
//!
//! Each function measures a quantity; thresholds are left to the caller.

use std::sync::Arc;

use crate::error::Result;
use crate::geom::CellPhase;
use crate::lifting::assemble_lifting_matrices;
use crate::mesh::{classify_boundary, CartesianMesh, FaceKind, SideKinds};
use crate::solver::{max_speed, poisson_solve, BoundaryConditions, FluidParams, Solver, SolverOptions};
use crate::space::{l2_error, DgFunction, DgSpace};
use crate::vof::circle_fraction;

/// Largest entry of `D_0 + G^T` and `D + G_0^T`, relative to the largest matrix entry.
///
/// Comparing the assembled matrices entry by entry is the same as testing
/// both integration-by-parts identities on every pair of basis functions.
pub fn adjointness_defect(nx: usize, ny: usize, degree: usize) -> Result<f64> {
    let mesh = Arc::new(CartesianMesh::new(nx, ny, [0.0, 0.0], [1.0, ny as f64 / nx as f64])?);
    let scalar = DgSpace::new(mesh.clone(), degree, 1);
    let vector = DgSpace::new(mesh.clone(), degree + 1, 2);
    let kinds = classify_boundary(&mesh, SideKinds::uniform(FaceKind::Dirichlet));
    let set = assemble_lifting_matrices(&scalar, &vector, &kinds)?;
    let mut worst: f64 = 0.0;
    for (d, g) in [(&set.div0.matrix, &set.grad.matrix), (&set.div.matrix, &set.grad0.matrix)] {
        let scale = d.max_abs().max(g.max_abs());
        let sum = d.to_dense().into_iter().zip(g.transpose().to_dense()).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
        worst = worst.max(sum / scale);
    }
    Ok(worst)
}

/// `L2` errors of the Poisson solver for `-lap p = 2 pi^2 sin(pi x) sin(pi y)` on the unit square.
pub fn poisson_errors(degree: usize, sizes: &[usize]) -> Result<Vec<f64>> {
    let pi = std::f64::consts::PI;
    sizes
        .iter()
        .map(|&n| {
            let mesh = Arc::new(CartesianMesh::new(n, n, [0.0, 0.0], [1.0, 1.0])?);
            let f = |x: [f64; 2]| 2.0 * pi * pi * (pi * x[0]).sin() * (pi * x[1]).sin();
            // 1e-12 sits at the round-off floor for k = 2 on 64^2; 1e-10 is still
            // several orders below the discretization error
            let (p, _) = poisson_solve(mesh, degree, f, 1e-10)?;
            Ok(l2_error(&p, |x, _| (pi * x[0]).sin() * (pi * x[1]).sin()))
        })
        .collect()
}

/// Observed orders `log2(e_i / e_{i+1})` for meshes refined by two.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Largest magnitude of the cell-averaged velocity.
pub fn max_cell_speed(u: &DgFunction) -> f64 {
    (0..u.space.mesh().num_cells()).map(|c| u.cell_mean(c, 0).hypot(u.cell_mean(c, 1))).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DropletReport {
    /// Mean pressure over pure droplet cells minus the mean over pure outer cells.
    pub pressure_jump: f64,
    /// `sigma / r`
    pub expected_jump: f64,
    /// Largest speed of the cell-averaged velocity at the final state.
    pub max_cell_velocity: f64,
    /// Largest speed at any quadrature point at the final state.
    pub max_point_velocity: f64,
    pub steps: usize,
}

/// Circular droplet of radius `0.25` at rest in `[0,1] x [0,2]` with the
/// case-1 fluids, no gravity, run for `steps` steps.
pub fn static_droplet(nx: usize, ny: usize, steps: usize) -> Result<DropletReport> {
    let mesh = Arc::new(CartesianMesh::new(nx, ny, [0.0, 0.0], [1.0, 2.0])?);
    let radius = 0.25;
    let params = FluidParams { rho: [1000.0, 100.0], mu: [10.0, 1.0], gravity: [0.0, 0.0], sigma: 24.5 };
    let opts = SolverOptions { ilu_refresh: 10, ..Default::default() };
    let mut solver = Solver::new(mesh.clone(), 1, params, BoundaryConditions::rising_bubble(), opts)?;
    let mut state = solver.initial_state(circle_fraction(&mesh, [0.5, 1.0], radius));
    for _ in 0..steps {
        let dt = solver.stable_dt(&state);
        solver.step(&mut state, dt)?;
    }
    let iface = solver.interface(&state.vof);
    let mut sums = [(0.0, 0usize); 2];
    for (cell, phase) in iface.geometry.cells.iter().enumerate() {
        if let CellPhase::Pure(ph) = phase {
            sums[*ph].0 += state.p.cell_mean(cell, 0);
            sums[*ph].1 += 1;
        }
    }
    let mean = |(s, n): (f64, usize)| s / n.max(1) as f64;
    Ok(DropletReport {
        pressure_jump: mean(sums[1]) - mean(sums[0]),
        expected_jump: params.sigma / radius,
        max_cell_velocity: max_cell_speed(&state.u),
        max_point_velocity: max_speed(&state.u),
        steps,
    })
}
