//! Height-function curvature.
//!
//! Fractions are summed over 7-cell columns along the axis closest to the
//! interface normal, giving the phase-2 extent `H` in three adjacent columns.
//! With `H` measured as phase-2 content, `kappa = -H'' / (1 + H'^2)^{3/2}` is
//! positive for a convex phase-2 region whichever side the phase lies on.

use nalgebra::{Matrix3, Vector3};

use super::{PlicSegment, VofField};
use crate::mesh::CartesianMesh;

const HALF_WIDTH: isize = 3;
/// End cells of a column must be this close to pure for a valid height.
const END_TOL: f64 = 1e-4;
/// Fallback fits only use segments whose normals are within 60 degrees of the
/// cell's, which keeps the fitted arc short enough for a parabola.
const FIT_MIN_COS: f64 = 0.5;
/// Gaussian width, in cells, of the distance weight in fallback fits.
const FIT_WIDTH: f64 = 1.0;

/// Curvature from heights summed along `axis`.
///
/// `axis = 1` sums vertically (interface is a graph over x), `axis = 0` sums
/// horizontally. Returns `None` when the stencil does not bracket the interface.
fn height_curvature(mesh: &CartesianMesh, chi: &[f64], cell: usize, axis: usize, nu: f64) -> Option<f64> {
    let (i, j) = mesh.cell_ij(cell);
    // (along, across): `along` is the summation direction
    let (n_along, n_across, a0, b0, h_along, h_across) = if axis == 1 {
        (mesh.ny, mesh.nx, j as isize, i as isize, mesh.hy, mesh.hx)
    } else {
        (mesh.nx, mesh.ny, i as isize, j as isize, mesh.hx, mesh.hy)
    };
    if n_along < (2 * HALF_WIDTH + 1) as usize || n_across < 3 {
        return None;
    }
    let at = |a: isize, b: isize| {
        let (ii, jj) = if axis == 1 { (b, a) } else { (a, b) };
        chi[mesh.cell_index(ii as usize, jj as usize)]
    };
    // shift windows into the domain (one-sided near boundaries)
    let lo = (a0 - HALF_WIDTH).clamp(0, n_along as isize - 1 - 2 * HALF_WIDTH);
    let bc = b0.clamp(1, n_across as isize - 2);
    let mut heights = [0.0; 3];
    for (k, b) in (bc - 1..=bc + 1).enumerate() {
        // phase 2 lies on the -along side when nu > 0
        let (first, last) = (at(lo, b), at(lo + 2 * HALF_WIDTH, b));
        let (full, empty) = if nu > 0.0 { (first, last) } else { (last, first) };
        if full < 1.0 - END_TOL || empty > END_TOL {
            return None;
        }
        heights[k] = (lo..=lo + 2 * HALF_WIDTH).map(|a| at(a, b)).sum::<f64>() * h_along;
    }
    let off = (b0 - bc) as f64; // -1, 0 or 1: evaluation point relative to the middle column
    let d2 = (heights[2] - 2.0 * heights[1] + heights[0]) / (h_across * h_across);
    let d1 = (heights[2] - heights[0]) / (2.0 * h_across) + off * d2 * h_across;
    Some(-d2 / (1.0 + d1 * d1).powf(1.5))
}

/// Parabola `eta = a0 + a1 s + a2 s^2` fitted by weighted least squares to the
/// segment midpoints in the 5x5 block around `seg`, in the frame of its normal.
/// Needs at least three midpoints.
fn fitted_curvature(mesh: &CartesianMesh, seg: &PlicSegment, by_cell: &[Option<usize>], segments: &[PlicSegment]) -> Option<f64> {
    const R: isize = 2;
    let (i, j) = mesh.cell_ij(seg.cell);
    let n = seg.normal;
    let t = [-n[1], n[0]];
    let o = seg.midpoint();
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    let mut count = 0;
    for dj in -R..=R {
        for di in -R..=R {
            let (ii, jj) = (i as isize + di, j as isize + dj);
            if ii < 0 || jj < 0 || ii >= mesh.nx as isize || jj >= mesh.ny as isize {
                continue;
            }
            let Some(k) = by_cell[mesh.cell_index(ii as usize, jj as usize)] else { continue };
            let other = &segments[k];
            if other.normal[0] * n[0] + other.normal[1] * n[1] <= FIT_MIN_COS {
                continue;
            }
            let m = other.midpoint();
            let d = [m[0] - o[0], m[1] - o[1]];
            let (sc, eta) = ((d[0] * t[0] + d[1] * t[1]) / mesh.h_min(), (d[0] * n[0] + d[1] * n[1]) / mesh.h_min());
            let w = other.length() / mesh.h_min() * (-(sc * sc + eta * eta) / (FIT_WIDTH * FIT_WIDTH)).exp();
            let row = Vector3::new(1.0, sc, sc * sc);
            ata += w * row * row.transpose();
            atb += w * eta * row;
            count += 1;
        }
    }
    if count < 3 {
        return None;
    }
    let a = ata.lu().solve(&atb)?;
    let k = -2.0 * a[2] / (1.0 + a[1] * a[1]).powf(1.5) / mesh.h_min();
    k.is_finite().then_some(k)
}

/// Curvature on every mixed cell (zero elsewhere).
///
/// Height functions where the stencil brackets the interface; otherwise a
/// parabola fit to nearby segment midpoints, so under-resolved corners keep
/// their curvature instead of inheriting that of flat neighbours.
pub fn curvature(mesh: &CartesianMesh, field: &VofField, segments: &[PlicSegment]) -> Vec<f64> {
    let mut kappa = vec![0.0; mesh.num_cells()];
    let mut known = vec![false; mesh.num_cells()];
    let mut by_cell = vec![None; mesh.num_cells()];
    for (k, s) in segments.iter().enumerate() {
        by_cell[s.cell] = Some(k);
    }
    let mut missing = Vec::new();
    for s in segments {
        let n = s.normal;
        let primary = if n[1].abs() >= n[0].abs() { 1 } else { 0 };
        let val = height_curvature(mesh, &field.chi, s.cell, primary, n[primary])
            .or_else(|| height_curvature(mesh, &field.chi, s.cell, 1 - primary, n[1 - primary]))
            .or_else(|| fitted_curvature(mesh, s, &by_cell, segments));
        match val {
            Some(k) => {
                kappa[s.cell] = k;
                known[s.cell] = true;
            }
            None => missing.push(s.cell),
        }
    }
    for cell in missing {
        let (sum, count) = mesh
            .stencil(cell)
            .into_iter()
            .filter(|&c| known[c])
            .fold((0.0, 0usize), |(s, n), c| (s + kappa[c], n + 1));
        kappa[cell] = if count > 0 { sum / count as f64 } else { 0.0 };
    }
    kappa
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vof::init::{circle_fraction, halfplane_fraction_field};
    use crate::vof::reconstruct_plic;

    fn circle_error(nx: usize) -> f64 {
        let mesh = CartesianMesh::new(nx, 2 * nx, [0.0, 0.0], [1.0, 2.0]).unwrap();
        let field = circle_fraction(&mesh, [0.5, 0.5], 0.25);
        let segs = reconstruct_plic(&mesh, &field);
        let k = curvature(&mesh, &field, &segs);
        segs.iter().map(|s| (k[s.cell] - 4.0).abs() / 4.0).fold(0.0, f64::max)
    }

    #[test]
    fn straight_interfaces_have_zero_curvature() {
        let mesh = CartesianMesh::new(12, 12, [0.0, 0.0], [1.0, 1.0]).unwrap();
        for (n, d) in [([0.0, 1.0], 0.43), ([0.6, 0.8], 0.6), ([-0.8, 0.6], -0.1)] {
            let field = halfplane_fraction_field(&mesh, n, d);
            let segs = reconstruct_plic(&mesh, &field);
            assert!(!segs.is_empty());
            let k = curvature(&mesh, &field, &segs);
            for s in &segs {
                let (i, j) = mesh.cell_ij(s.cell);
                // clamped Youngs stencils tilt the normal on the boundary row, so a
                // midpoint fit reaching it sees a slightly kinked line
                let on_boundary = i.min(j) < 2 || i + 2 >= mesh.nx || j + 2 >= mesh.ny;
                let tol = if on_boundary { 0.05 / mesh.h_min() } else { 1e-10 };
                assert!(k[s.cell].abs() < tol, "{n:?}: cell {:?} normal {:?} k {}", (i, j), s.normal, k[s.cell]);
            }
        }
    }

    #[test]
    fn circle_curvature_on_benchmark_grid() {
        let e = circle_error(80);
        assert!(e < 0.05, "relative error {e}");
    }

    #[test]
    fn circle_curvature_converges() {
        let e: Vec<f64> = [20, 40, 80].iter().map(|&n| circle_error(n)).collect();
        let order = (e[0] / e[2]).log2() / 2.0;
        assert!(order > 1.5, "errors {e:?}, order {order}");
    }

    #[test]
    fn curvature_sign_follows_the_phase() {
        // a droplet of phase 1 in phase 2 is concave for phase 2
        let mesh = CartesianMesh::new(40, 40, [0.0, 0.0], [1.0, 1.0]).unwrap();
        let mut field = circle_fraction(&mesh, [0.5, 0.5], 0.25);
        field.chi.iter_mut().for_each(|c| *c = 1.0 - *c);
        let segs = reconstruct_plic(&mesh, &field);
        let k = curvature(&mesh, &field, &segs);
        for s in &segs {
            assert!((k[s.cell] + 4.0).abs() < 0.3, "cell {:?} n {:?} k {}", mesh.cell_ij(s.cell), s.normal, k[s.cell]);
        }
    }

    #[test]
    fn under_resolved_circles_keep_their_curvature() {
        // radius of two cells: the height stencils fail almost everywhere
        let mesh = CartesianMesh::new(40, 40, [0.0, 0.0], [1.0, 1.0]).unwrap();
        let r = 2.0 / 40.0;
        let field = circle_fraction(&mesh, [0.513, 0.507], r);
        let segs = reconstruct_plic(&mesh, &field);
        let k = curvature(&mesh, &field, &segs);
        for s in &segs {
            assert!((0.9..1.4).contains(&(k[s.cell] * r)), "kappa r = {}", k[s.cell] * r);
        }
        let turning: f64 = segs.iter().map(|s| k[s.cell] * s.length()).sum();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((turning - two_pi).abs() < 0.2 * two_pi, "total turning {turning}");
    }
}
