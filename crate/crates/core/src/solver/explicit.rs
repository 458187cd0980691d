//! Explicit DG advection of the velocity with a local Lax-Friedrichs flux.
//!
//! Weak form per cell, test function `psi e_c`:
//!
//! ```text
//! d/dt u_c = int_E u_c (w . grad psi) - sum_e int_e F_c psi
//! F_c      = 1/2 (u_c^- w^- + u_c^+ w^+) . n + 1/2 lambda (u_c^- - u_c^+)
//! ```
//!
//! with `w = u` and `lambda = max(|w^- . n|, |w^+ . n|)`. On boundary faces
//! the exterior trace takes the datum on Dirichlet components and the interior
//! value on Neumann components. The basis is orthonormal, so no solve is needed.

use super::params::{BoundaryConditions, VelocityBc};
use crate::error::{Error, Result};
use crate::mesh::Point;
use crate::space::{side_points, DgFunction, Quadrature};

/// Largest velocity magnitude at the volume quadrature points.
pub fn max_speed(u: &DgFunction) -> f64 {
    let space = &u.space;
    let quad = Quadrature::square(space.degree() + 2);
    let table = space.table(&quad.points);
    let mut m: f64 = 0.0;
    for cell in 0..space.mesh().num_cells() {
        for q in 0..quad.len() {
            let phi = table.values_at(q);
            let ux: f64 = u.cell_coeffs(cell, 0).iter().zip(phi).map(|(a, b)| a * b).sum();
            let uy: f64 = u.cell_coeffs(cell, 1).iter().zip(phi).map(|(a, b)| a * b).sum();
            m = m.max(ux.hypot(uy));
        }
    }
    m
}

fn exterior_state(bc: VelocityBc, axis: usize, interior: Point) -> Point {
    match bc {
        VelocityBc::NoSlip => [0.0, 0.0],
        VelocityBc::Inflow(v) => v,
        VelocityBc::FreeSlip => {
            let mut e = interior;
            e[axis] = 0.0;
            e
        }
    }
}

/// Coefficients of the advection right-hand side.
pub fn advection_rate(u: &DgFunction, bcs: &BoundaryConditions) -> Vec<f64> {
    let space = &u.space;
    let mesh = space.mesh();
    let m = space.local_dim();
    let k = space.degree();
    let mut rate = vec![0.0; space.dim()];

    let vq = Quadrature::square(3 * k + 1);
    let vt = space.table(&vq.points);
    let jac = 0.25 * mesh.hx * mesh.hy;
    let eval = |cell: usize, c: usize, phi: &[f64]| -> f64 { u.cell_coeffs(cell, c).iter().zip(phi).map(|(a, b)| a * b).sum() };
    for cell in 0..mesh.num_cells() {
        for q in 0..vq.len() {
            let phi = vt.values_at(q);
            let grads = vt.grads_at(q);
            let w = vq.weights[q] * jac;
            let uv = [eval(cell, 0, phi), eval(cell, 1, phi)];
            for i in 0..m {
                let wg = uv[0] * grads[i][0] + uv[1] * grads[i][1];
                for c in 0..2 {
                    rate[space.dof(cell, c, i)] += w * uv[c] * wg;
                }
            }
        }
    }

    let lq = Quadrature::line(3 * k + 1);
    let tables = crate::mesh::Side::ALL.map(|s| space.table(&side_points(s, &lq)));
    for f in mesh.faces() {
        let n = f.normal;
        let axis = f.axis.index();
        let tm = &tables[f.minus_side.index()];
        let tp = &tables[f.minus_side.opposite().index()];
        for q in 0..lq.len() {
            let w = lq.weights[q] * 0.5 * f.length;
            let pm = tm.values_at(q);
            let um = [eval(f.minus, 0, pm), eval(f.minus, 1, pm)];
            let up = match (f.plus, f.boundary) {
                (Some(p), _) => {
                    let pp = tp.values_at(q);
                    [eval(p, 0, pp), eval(p, 1, pp)]
                }
                (None, Some(side)) => exterior_state(bcs.get(side), axis, um),
                (None, None) => unreachable!("boundary face without a side"),
            };
            let wm = um[0] * n[0] + um[1] * n[1];
            let wp = up[0] * n[0] + up[1] * n[1];
            let lambda = wm.abs().max(wp.abs());
            for c in 0..2 {
                let flux = 0.5 * (um[c] * wm + up[c] * wp) + 0.5 * lambda * (um[c] - up[c]);
                for i in 0..m {
                    rate[space.dof(f.minus, c, i)] -= w * flux * pm[i];
                }
                if let Some(p) = f.plus {
                    let pp = tp.values_at(q);
                    for i in 0..m {
                        rate[space.dof(p, c, i)] += w * flux * pp[i];
                    }
                }
            }
        }
    }
    rate
}

/// Forward-Euler advection plus gravity: `u_hat = u + dt (A(u) + g)`.
pub fn explicit_advection_step(
    u: &DgFunction,
    bcs: &BoundaryConditions,
    gravity: Point,
    dt: f64,
    cfl: f64,
) -> Result<DgFunction> {
    let space = &u.space;
    let mesh = space.mesh();
    let speed = max_speed(u);
    let limit = cfl * mesh.h_min() / (2 * space.degree() + 1) as f64;
    if speed * dt > limit * (1.0 + 1e-12) {
        return Err(Error::Cfl { what: "explicit advection", value: speed * dt, limit });
    }
    let mut out = u.clone();
    if speed > 0.0 {
        for (o, r) in out.coeffs.iter_mut().zip(advection_rate(u, bcs)) {
            *o += dt * r;
        }
    }
    let g0 = mesh.cell_area().sqrt();
    for cell in 0..mesh.num_cells() {
        for c in 0..2 {
            out.coeffs[space.dof(cell, c, 0)] += dt * gravity[c] * g0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{CartesianMesh, Side};
    use crate::space::{l2_error, project_l2, DgSpace};
    use std::sync::Arc;

    fn space(n: usize) -> DgSpace {
        DgSpace::new(Arc::new(CartesianMesh::new(n, n, [0.0, 0.0], [1.0, 1.0]).unwrap()), 2, 2)
    }

    #[test]
    fn rest_without_gravity_stays_at_rest() {
        let s = space(4);
        let u = DgFunction::zeros(&s);
        let out = explicit_advection_step(&u, &BoundaryConditions::uniform(VelocityBc::NoSlip), [0.0, 0.0], 0.01, 0.2).unwrap();
        assert!(out.coeffs.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn gravity_gives_uniform_increment() {
        let s = space(4);
        let u = DgFunction::zeros(&s);
        let dt = 0.01;
        let out = explicit_advection_step(&u, &BoundaryConditions::uniform(VelocityBc::NoSlip), [0.0, -0.98], dt, 0.2).unwrap();
        assert!(l2_error(&out, |_, c| if c == 1 { -0.98 * dt } else { 0.0 }) < 1e-14);
    }

    #[test]
    fn constant_state_is_preserved() {
        let s = space(5);
        let u = project_l2(&s, |_, c| if c == 0 { 1.0 } else { 0.0 });
        let mut bcs = BoundaryConditions::uniform(VelocityBc::FreeSlip);
        bcs.0[Side::Left.index()] = VelocityBc::Inflow([1.0, 0.0]);
        bcs.0[Side::Right.index()] = VelocityBc::Inflow([1.0, 0.0]);
        let dt = 0.005;
        let out = explicit_advection_step(&u, &bcs, [0.0, -0.98], dt, 0.2).unwrap();
        assert!(l2_error(&out, |_, c| if c == 0 { 1.0 } else { -0.98 * dt }) < 1e-12);
    }

    #[test]
    fn cfl_is_enforced() {
        let s = space(5);
        let u = project_l2(&s, |_, c| if c == 0 { 1.0 } else { 0.0 });
        let bcs = BoundaryConditions::uniform(VelocityBc::Inflow([1.0, 0.0]));
        assert!(matches!(explicit_advection_step(&u, &bcs, [0.0, 0.0], 0.1, 0.2), Err(Error::Cfl { .. })));
    }

    #[test]
    fn advection_rate_is_consistent() {
        // rate ~ -(u . grad) u - u div u = -div(u (x) u) for a smooth field
        let f = |x: Point| [0.3 + 0.5 * x[1], 0.2 * (x[0] * 3.0).sin()];
        let exact = |x: Point, c: usize| {
            let u = f(x);
            let du = [[0.0, 0.5], [0.6 * (x[0] * 3.0).cos(), 0.0]];
            let div = du[0][0] + du[1][1];
            -(u[0] * du[c][0] + u[1] * du[c][1] + u[c] * div)
        };
        let mut errs = Vec::new();
        for n in [8, 16] {
            let s = space(n);
            let u = project_l2(&s, |x, c| f(x)[c]);
            let bcs = BoundaryConditions::uniform(VelocityBc::Inflow([0.0, 0.0]));
            let r = DgFunction::from_coeffs(&s, advection_rate(&u, &bcs)).unwrap();
            // compare on interior cells only: the boundary datum is inconsistent on purpose
            let interior = project_l2(&s, |x, c| {
                if x[0] > 0.25 && x[0] < 0.75 && x[1] > 0.25 && x[1] < 0.75 { r.evaluate_physical(x).unwrap()[c] - exact(x, c) } else { 0.0 }
            });
            errs.push(interior.l2_norm());
        }
        assert!(errs[1] < 0.3 * errs[0], "{errs:?}");
    }
}
