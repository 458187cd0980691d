//! PLIC reconstruction: Youngs normals and analytic line positioning.

use super::VofField;
use crate::mesh::{CartesianMesh, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct PlicSegment {
    pub cell: usize,
    /// Unit normal pointing from phase 2 into phase 1.
    pub normal: Point,
    /// Phase 2 is `normal . x <= offset`.
    pub offset: f64,
    pub endpoints: [Point; 2],
}

impl PlicSegment {
    pub fn length(&self) -> f64 {
        let [a, b] = self.endpoints;
        (b[0] - a[0]).hypot(b[1] - a[1])
    }

    pub fn midpoint(&self) -> Point {
        let [a, b] = self.endpoints;
        [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
    }
}

/// Area fraction of `{m1 x + m2 y <= alpha}` in the unit square, `m >= 0`, `m1 + m2 = 1`.
pub fn fraction_below(m: [f64; 2], alpha: f64) -> f64 {
    let (m1, m2) = if m[0] <= m[1] { (m[0], m[1]) } else { (m[1], m[0]) };
    if alpha <= 0.0 {
        return 0.0;
    }
    if alpha >= 1.0 {
        return 1.0;
    }
    if m1 < 1e-15 {
        return alpha;
    }
    if alpha < m1 {
        alpha * alpha / (2.0 * m1 * m2)
    } else if alpha <= m2 {
        (2.0 * alpha - m1) / (2.0 * m2)
    } else {
        1.0 - (1.0 - alpha).powi(2) / (2.0 * m1 * m2)
    }
}

/// Inverse of [`fraction_below`].
pub fn alpha_for_fraction(m: [f64; 2], v: f64) -> f64 {
    let (m1, m2) = if m[0] <= m[1] { (m[0], m[1]) } else { (m[1], m[0]) };
    let v = v.clamp(0.0, 1.0);
    if m1 < 1e-15 {
        return v;
    }
    let v1 = m1 / (2.0 * m2);
    if v <= v1 {
        (2.0 * m1 * m2 * v).sqrt()
    } else if v <= 1.0 - v1 {
        v * m2 + 0.5 * m1
    } else {
        1.0 - (2.0 * m1 * m2 * (1.0 - v)).sqrt()
    }
}

/// Scaled slopes and the shift mapping `normal . x` onto the unit-square form.
fn scaled(mesh: &CartesianMesh, cell: usize, normal: Point) -> ([f64; 2], f64, f64) {
    let (lo, _) = mesh.cell_bounds(cell);
    let mx = normal[0] * mesh.hx;
    let my = normal[1] * mesh.hy;
    let s = mx.abs() + my.abs();
    let shift = normal[0] * lo[0] + normal[1] * lo[1] + mx.min(0.0) + my.min(0.0);
    ([mx.abs() / s, my.abs() / s], s, shift)
}

/// Area fraction of `{normal . x <= offset}` within a cell.
pub fn halfplane_fraction(mesh: &CartesianMesh, cell: usize, normal: Point, offset: f64) -> f64 {
    let (m, s, shift) = scaled(mesh, cell, normal);
    fraction_below(m, (offset - shift) / s)
}

/// Segment of the line `normal . x = offset` inside a cell, if it crosses it.
pub fn segment_for_halfplane(mesh: &CartesianMesh, cell: usize, normal: Point, offset: f64) -> Option<PlicSegment> {
    let (lo, hi) = mesh.cell_bounds(cell);
    let corners = [lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]];
    let f = |p: Point| normal[0] * p[0] + normal[1] * p[1] - offset;
    let mut pts: Vec<Point> = Vec::with_capacity(4);
    for i in 0..4 {
        let (p, q) = (corners[i], corners[(i + 1) % 4]);
        let (fp, fq) = (f(p), f(q));
        if fp == 0.0 {
            pts.push(p);
        } else if fp * fq < 0.0 {
            let t = fp / (fp - fq);
            pts.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    let mut best: Option<(f64, [Point; 2])> = None;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = (pts[i][0] - pts[j][0]).hypot(pts[i][1] - pts[j][1]);
            if best.is_none_or(|(b, _)| d > b) {
                best = Some((d, [pts[i], pts[j]]));
            }
        }
    }
    let (len, endpoints) = best?;
    (len > 0.0).then_some(PlicSegment { cell, normal, offset, endpoints })
}

/// Places the line with the given normal so that phase 2 fills `fraction` of the cell.
pub fn position_line(mesh: &CartesianMesh, cell: usize, normal: Point, fraction: f64) -> PlicSegment {
    let (m, s, shift) = scaled(mesh, cell, normal);
    let offset = alpha_for_fraction(m, fraction) * s + shift;
    segment_for_halfplane(mesh, cell, normal, offset).unwrap_or_else(|| {
        let c = mesh.cell_center(cell);
        PlicSegment { cell, normal, offset, endpoints: [c, c] }
    })
}

/// Youngs finite-difference gradient of the fraction field on the 3x3 stencil.
/// Missing neighbours across the domain boundary are replaced by the cell itself.
pub fn youngs_gradient(mesh: &CartesianMesh, chi: &[f64], cell: usize) -> Point {
    let (i, j) = mesh.cell_ij(cell);
    let at = |di: isize, dj: isize| {
        let ii = (i as isize + di).clamp(0, mesh.nx as isize - 1) as usize;
        let jj = (j as isize + dj).clamp(0, mesh.ny as isize - 1) as usize;
        chi[mesh.cell_index(ii, jj)]
    };
    let gx = (at(1, 1) + 2.0 * at(1, 0) + at(1, -1) - at(-1, 1) - 2.0 * at(-1, 0) - at(-1, -1)) / (8.0 * mesh.hx);
    let gy = (at(1, 1) + 2.0 * at(0, 1) + at(-1, 1) - at(1, -1) - 2.0 * at(0, -1) - at(-1, -1)) / (8.0 * mesh.hy);
    [gx, gy]
}

/// Interface normal of a mixed cell: `-grad chi / |grad chi|`.
pub fn interface_normal(mesh: &CartesianMesh, field: &VofField, cell: usize) -> Point {
    let g = youngs_gradient(mesh, &field.chi, cell);
    let n = g[0].hypot(g[1]);
    if n < 1e-12 {
        field.fallback_normal(cell)
    } else {
        [-g[0] / n, -g[1] / n]
    }
}

/// One segment per mixed cell.
pub fn reconstruct_plic(mesh: &CartesianMesh, field: &VofField) -> Vec<PlicSegment> {
    (0..mesh.num_cells())
        .filter(|&c| field.is_mixed(c))
        .map(|c| position_line(mesh, c, interface_normal(mesh, field, c), field.chi[c]))
        .filter(|s| s.length() > 0.0)
        .collect()
}

/// Reconstruction with prescribed normals (used to check exactness).
pub fn reconstruct_with_normals<F: Fn(usize) -> Point>(mesh: &CartesianMesh, field: &VofField, normal: F) -> Vec<PlicSegment> {
    (0..mesh.num_cells())
        .filter(|&c| field.is_mixed(c))
        .map(|c| position_line(mesh, c, normal(c), field.chi[c]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::clip_cell;
    use crate::vof::init::{circle_fraction, halfplane_fraction_field};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn inverse_flooding_round_trips(m1 in 0.0f64..1.0, v in 0.0f64..1.0) {
            let m = [m1, 1.0 - m1];
            let a = alpha_for_fraction(m, v);
            prop_assert!((fraction_below(m, a) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn half_cell_with_horizontal_normal() {
        let mesh = CartesianMesh::new(1, 1, [0.0, 0.0], [1.0, 1.0]).unwrap();
        let s = position_line(&mesh, 0, [1.0, 0.0], 0.5);
        assert!((s.offset - 0.5).abs() < 1e-15);
        for p in s.endpoints {
            assert!((p[0] - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_interface_is_reconstructed_exactly() {
        let mesh = CartesianMesh::new(8, 8, [0.0, 0.0], [1.0, 1.0]).unwrap();
        let th: f64 = 0.4;
        let n = [th.cos(), th.sin()];
        let d = 0.55;
        let field = halfplane_fraction_field(&mesh, n, d);
        // Youngs normals are exact for a straight line away from the boundary
        let segs = reconstruct_plic(&mesh, &field);
        assert!(!segs.is_empty());
        for s in &segs {
            let (i, j) = mesh.cell_ij(s.cell);
            if i == 0 || j == 0 || i == 7 || j == 7 {
                continue;
            }
            let (lo, hi) = mesh.cell_bounds(s.cell);
            let (_, p2) = clip_cell(lo, hi, s).unwrap();
            assert!((p2.area() / mesh.cell_area() - field.chi[s.cell]).abs() < 1e-12);
        }
        let exact = reconstruct_with_normals(&mesh, &field, |_| n);
        for s in &exact {
            assert!((s.offset - d).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_segments_converge_at_second_order() {
        let mut errs = Vec::new();
        for n in [20, 40, 80] {
            let mesh = CartesianMesh::new(n, 2 * n, [0.0, 0.0], [1.0, 2.0]).unwrap();
            let field = circle_fraction(&mesh, [0.5, 0.5], 0.25);
            let segs = reconstruct_plic(&mesh, &field);
            let e = segs
                .iter()
                .map(|s| {
                    let m = s.midpoint();
                    ((m[0] - 0.5).hypot(m[1] - 0.5) - 0.25).abs()
                })
                .fold(0.0, f64::max);
            errs.push(e);
            assert!(e < 0.5 / (n * n) as f64, "{e} at {n}");
            for s in &segs {
                let (lo, hi) = mesh.cell_bounds(s.cell);
                let (_, p2) = clip_cell(lo, hi, s).unwrap();
                assert!((p2.area() / mesh.cell_area() - field.chi[s.cell]).abs() < 1e-12);
            }
        }
        assert!((errs[0] / errs[2]).log2() / 2.0 > 1.5, "{errs:?}");
    }

    #[test]
    fn pure_cells_have_no_segment() {
        let mesh = CartesianMesh::new(4, 4, [0.0, 0.0], [1.0, 1.0]).unwrap();
        let segs = reconstruct_plic(&mesh, &VofField::new(vec![1.0; 16]));
        assert!(segs.is_empty());
        let mut chi = vec![0.0; 16];
        chi[5] = 1e-9;
        assert!(reconstruct_plic(&mesh, &VofField::new(chi)).is_empty());
    }

    #[test]
    fn degenerate_gradient_uses_fallback() {
        let mesh = CartesianMesh::new(3, 3, [0.0, 0.0], [1.0, 1.0]).unwrap();
        let field = VofField::new(vec![0.5; 9]);
        let segs = reconstruct_plic(&mesh, &field);
        assert_eq!(segs.len(), 9);
        assert_eq!(segs[4].normal, [0.0, 1.0]);
    }
}
