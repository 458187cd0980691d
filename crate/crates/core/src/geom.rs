//! Polygon clipping and cut-cell quadratures.
//!
//! A mixed cell is split by its PLIC segment into two convex polygons; each is
//! fan-triangulated and a collapsed-square simplex rule is mapped onto every
//! triangle. The segment itself gets a Gauss rule for the surface-tension term.

use nalgebra::DMatrix;

use crate::mesh::{CartesianMesh, Point};
use crate::space::{DgSpace, Quadrature};
use crate::vof::PlicSegment;

/// Convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polygon {
    pub vertices: Vec<Point>,
}

impl Polygon {
    pub fn rectangle(lo: Point, hi: Point) -> Self {
        Self { vertices: vec![lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]] }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 3
    }

    pub fn area(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let n = self.vertices.len();
        let mut a = 0.0;
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            a += p[0] * q[1] - q[0] * p[1];
        }
        0.5 * a
    }

    pub fn centroid(&self) -> Option<Point> {
        let a = self.area();
        if a <= 0.0 {
            return None;
        }
        let n = self.vertices.len();
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let c = p[0] * q[1] - q[0] * p[1];
            cx += (p[0] + q[0]) * c;
            cy += (p[1] + q[1]) * c;
        }
        Some([cx / (6.0 * a), cy / (6.0 * a)])
    }

    /// Part of the polygon with `normal . x <= offset` (Sutherland-Hodgman).
    pub fn clip(&self, normal: Point, offset: f64) -> Polygon {
        let n = self.vertices.len();
        let mut out: Vec<Point> = Vec::with_capacity(n + 1);
        let f = |p: Point| normal[0] * p[0] + normal[1] * p[1] - offset;
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let (fp, fq) = (f(p), f(q));
            if fp <= 0.0 {
                out.push(p);
            }
            if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
                let t = fp / (fp - fq);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
        dedup_cyclic(&mut out);
        Polygon { vertices: out }
    }

    /// Fan triangulation from the first vertex (valid for convex polygons).
    pub fn triangles(&self) -> impl Iterator<Item = [Point; 3]> + '_ {
        let v = &self.vertices;
        (1..v.len().saturating_sub(1)).map(move |i| [v[0], v[i], v[i + 1]])
    }

    pub fn integrate<F: Fn(Point) -> f64>(&self, degree: usize, f: F) -> f64 {
        integrate_polygon(self, degree, f)
    }
}

fn dedup_cyclic(v: &mut Vec<Point>) {
    let close = |a: Point, b: Point| (a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-15;
    v.dedup_by(|a, b| close(*a, *b));
    while v.len() > 1 && close(v[0], *v.last().unwrap()) {
        v.pop();
    }
}

fn triangle_area(t: &[Point; 3]) -> f64 {
    0.5 * ((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (t[1][1] - t[0][1]))
}

/// Physical quadrature points and weights.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuadRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn integrate<F: Fn(Point) -> f64>(&self, f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(*p)).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    fn push_polygon(&mut self, poly: &Polygon, tri: &Quadrature, min_area: f64) {
        for t in poly.triangles() {
            let a = triangle_area(&t);
            if a.abs() < min_area {
                continue;
            }
            for (p, w) in tri.points.iter().zip(&tri.weights) {
                let (s, r) = (p[0], p[1]);
                self.points.push([
                    t[0][0] + s * (t[1][0] - t[0][0]) + r * (t[2][0] - t[0][0]),
                    t[0][1] + s * (t[1][1] - t[0][1]) + r * (t[2][1] - t[0][1]),
                ]);
                self.weights.push(w * 2.0 * a);
            }
        }
    }
}

pub fn integrate_polygon<F: Fn(Point) -> f64>(poly: &Polygon, degree: usize, f: F) -> f64 {
    let mut rule = QuadRule::default();
    rule.push_polygon(poly, &Quadrature::triangle(degree), 0.0);
    rule.integrate(f)
}

/// Splits a cell rectangle along a PLIC segment into `(phase 1, phase 2)`.
///
/// Returns `None` for a zero-length segment; the caller treats the cell as pure.
pub fn clip_cell(lo: Point, hi: Point, seg: &PlicSegment) -> Option<(Polygon, Polygon)> {
    let len = seg.length();
    if len <= 1e-14 * (hi[0] - lo[0]).max(hi[1] - lo[1]) {
        return None;
    }
    let rect = Polygon::rectangle(lo, hi);
    let n = seg.normal;
    let phase2 = rect.clip(n, seg.offset);
    let phase1 = rect.clip([-n[0], -n[1]], -seg.offset);
    Some((phase1, phase2))
}

/// Quadratures for both phases and the interface of one mixed cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CutQuadrature {
    pub cell: usize,
    /// `phase[0]` covers phase 1, `phase[1]` phase 2.
    pub phase: [QuadRule; 2],
    pub interface: QuadRule,
    /// Interface normal pointing out of phase 2.
    pub normal: Point,
    pub polygons: [Polygon; 2],
}

pub fn build_cut_quadrature(mesh: &CartesianMesh, seg: &PlicSegment, order: usize) -> Option<CutQuadrature> {
    let (lo, hi) = mesh.cell_bounds(seg.cell);
    let (p1, p2) = clip_cell(lo, hi, seg)?;
    let order = order.max(1);
    let tri = Quadrature::triangle(order);
    let min_area = 1e-14 * mesh.cell_area();
    let mut phase = [QuadRule::default(), QuadRule::default()];
    phase[0].push_polygon(&p1, &tri, min_area);
    phase[1].push_polygon(&p2, &tri, min_area);
    let line = Quadrature::line(order);
    let mut interface = QuadRule::default();
    let (a, b) = (seg.endpoints[0], seg.endpoints[1]);
    let len = seg.length();
    for (p, w) in line.points.iter().zip(&line.weights) {
        let s = 0.5 * (p[0] + 1.0);
        interface.points.push([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]);
        interface.weights.push(0.5 * w * len);
    }
    Some(CutQuadrature { cell: seg.cell, phase, interface, normal: seg.normal, polygons: [p1, p2] })
}

/// Phase layout of one cell.
#[derive(Debug, Clone, PartialEq)]
pub enum CellPhase {
    /// Entirely phase 1 (`0`) or phase 2 (`1`).
    Pure(usize),
    Cut(Box<CutQuadrature>),
}

/// Per-cell phase layout for the whole mesh.
#[derive(Debug, Clone)]
pub struct PhaseGeometry {
    pub cells: Vec<CellPhase>,
    pub order: usize,
}

impl PhaseGeometry {
    pub fn build(mesh: &CartesianMesh, chi: &[f64], segments: &[PlicSegment], order: usize) -> Self {
        let mut cells: Vec<CellPhase> = chi.iter().map(|&c| CellPhase::Pure(usize::from(c > 0.5))).collect();
        for seg in segments {
            if let Some(cq) = build_cut_quadrature(mesh, seg, order) {
                cells[seg.cell] = CellPhase::Cut(Box::new(cq));
            }
        }
        Self { cells, order }
    }

    pub fn cut_cells(&self) -> impl Iterator<Item = &CutQuadrature> {
        self.cells.iter().filter_map(|c| match c {
            CellPhase::Cut(q) => Some(&**q),
            CellPhase::Pure(_) => None,
        })
    }
}

/// `M_ij = int_E c psi_i psi_j` with `c` piecewise constant per phase.
pub fn phase_mass_matrix(space: &DgSpace, cell: usize, phase: &CellPhase, coef: [f64; 2]) -> DMatrix<f64> {
    let m = space.local_dim();
    match phase {
        CellPhase::Pure(p) => DMatrix::identity(m, m) * coef[*p],
        CellPhase::Cut(cq) => {
            let mesh = space.mesh();
            let mut out = DMatrix::zeros(m, m);
            let mut psi = vec![0.0; m];
            for (rule, c) in cq.phase.iter().zip(coef) {
                for (p, w) in rule.points.iter().zip(&rule.weights) {
                    space.eval_basis(mesh.to_reference(cell, *p), &mut psi);
                    let wc = w * c;
                    for i in 0..m {
                        let s = wc * psi[i];
                        for j in 0..=i {
                            out[(i, j)] += s * psi[j];
                        }
                    }
                }
            }
            for i in 0..m {
                for j in 0..i {
                    out[(j, i)] = out[(i, j)];
                }
            }
            out
        }
    }
}

/// Weighted local mass matrices of every cell.
pub fn assemble_phase_integrals(space: &DgSpace, geometry: &PhaseGeometry, coef: [f64; 2]) -> Vec<DMatrix<f64>> {
    geometry.cells.iter().enumerate().map(|(c, p)| phase_mass_matrix(space, c, p, coef)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vof::plic::segment_for_halfplane;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn unit() -> CartesianMesh {
        CartesianMesh::new(1, 1, [0.0, 0.0], [1.0, 1.0]).unwrap()
    }

    fn seg(normal: Point, offset: f64) -> PlicSegment {
        segment_for_halfplane(&unit(), 0, normal, offset).unwrap()
    }

    #[test]
    fn vertical_cut_areas() {
        let (p1, p2) = clip_cell([0.0, 0.0], [1.0, 1.0], &seg([1.0, 0.0], 0.3)).unwrap();
        assert!((p2.area() - 0.3).abs() < 1e-15);
        assert!((p1.area() - 0.7).abs() < 1e-15);
        let c = p2.centroid().unwrap();
        assert!((c[0] - 0.15).abs() < 1e-15 && (c[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn diagonal_cut_areas() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (p1, p2) = clip_cell([0.0, 0.0], [1.0, 1.0], &seg([s, -s], 0.0)).unwrap();
        assert!((p1.area() - 0.5).abs() < 1e-15 && (p2.area() - 0.5).abs() < 1e-15);
        assert_eq!(p2.vertices.len(), 3);
    }

    #[test]
    fn random_cuts_partition_the_cell() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mesh = Arc::new(CartesianMesh::new(1, 1, [0.0, 0.0], [1.0, 1.0]).unwrap());
        for _ in 0..200 {
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let n = [th.cos(), th.sin()];
            let vol: f64 = rng.gen_range(0.02..0.98);
            let s = crate::vof::plic::position_line(&mesh, 0, n, vol);
            let (p1, p2) = clip_cell([0.0, 0.0], [1.0, 1.0], &s).unwrap();
            assert!((p1.area() + p2.area() - 1.0).abs() < 1e-14);
            assert!((p2.area() - vol).abs() < 1e-12, "{} vs {vol}", p2.area());
        }
    }

    #[test]
    fn zero_length_segment_signals_pure_cell() {
        let mut s = seg([1.0, 0.0], 0.5);
        s.endpoints[1] = s.endpoints[0];
        assert!(clip_cell([0.0, 0.0], [1.0, 1.0], &s).is_none());
    }

    #[test]
    fn cut_quadrature_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sg = seg([s, s], s);
        let cq = build_cut_quadrature(&unit(), &sg, 4).unwrap();
        let total = cq.phase[0].total_weight() + cq.phase[1].total_weight();
        assert!((total - 1.0).abs() < 1e-14);
        // phase 2 is the triangle (0,0),(1,0),(0,1)
        assert!((cq.phase[1].integrate(|x| x[0]) - 1.0 / 6.0).abs() < 1e-14);
        assert!((cq.interface.total_weight() - 2f64.sqrt()).abs() < 1e-14);
        assert!((cq.interface.integrate(|x| x[0]) - 2f64.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn cut_quadrature_is_exact_for_polynomials() {
        let mesh = CartesianMesh::new(1, 1, [0.0, 0.0], [1.0, 1.0]).unwrap();
        let sg = crate::vof::plic::position_line(&Arc::new(mesh.clone()), 0, [0.6, 0.8], 0.37);
        let cq = build_cut_quadrature(&mesh, &sg, 6).unwrap();
        let f = |x: Point| x[0].powi(3) * x[1].powi(3) - 2.0 * x[0].powi(5) * x[1] + x[1].powi(6);
        let both = cq.phase[0].integrate(f) + cq.phase[1].integrate(f);
        let exact = 1.0 / 16.0 - 2.0 / 12.0 + 1.0 / 7.0;
        assert!((both - exact).abs() < 1e-13);
        let fine = integrate_polygon(&cq.polygons[1], 12, f);
        assert!((cq.phase[1].integrate(f) - fine).abs() < 1e-13);
    }

    #[test]
    fn phase_mass_matrix_examples() {
        let mesh = Arc::new(CartesianMesh::new(2, 2, [0.0, 0.0], [1.0, 1.0]).unwrap());
        let space = DgSpace::new(mesh.clone(), 2, 1);
        let sg = segment_for_halfplane(&mesh, 0, [1.0, 0.0], 0.25).unwrap();
        let cut = CellPhase::Cut(Box::new(build_cut_quadrature(&mesh, &sg, 6).unwrap()));
        let same = phase_mass_matrix(&space, 0, &cut, [3.0, 3.0]);
        assert!((same - DMatrix::identity(6, 6) * 3.0).abs().max() < 1e-12);
        assert_eq!(phase_mass_matrix(&space, 0, &CellPhase::Pure(1), [1000.0, 100.0])[(0, 0)], 100.0);
        let w = phase_mass_matrix(&space, 0, &cut, [1000.0, 100.0]);
        // phi_0^2 |E| = 1 with the orthonormal basis
        assert!((w[(0, 0)] - (1000.0 * 0.5 + 100.0 * 0.5)).abs() < 1e-10);
        assert!((&w - w.transpose()).abs().max() == 0.0);
    }
}
