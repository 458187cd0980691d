//! Broken polynomial spaces `V_k^d` over a Cartesian mesh.
//!
//! Coefficients are stored cell-major: `[cell][component][basis]`. The basis on
//! every physical cell is the reference orthonormal basis scaled by
//! `2 / sqrt(hx hy)`, so local mass matrices are the identity.

pub mod basis;
pub mod quadrature;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{CartesianMesh, Face, Point, Side};

pub use basis::ScalarBasis;
pub use quadrature::Quadrature;

#[derive(Debug, Clone)]
pub struct DgSpace {
    mesh: Arc<CartesianMesh>,
    degree: usize,
    ncomp: usize,
    basis: ScalarBasis,
    scale: f64,
}

impl DgSpace {
    pub fn new(mesh: Arc<CartesianMesh>, degree: usize, ncomp: usize) -> Self {
        assert!(ncomp == 1 || ncomp == 2, "only scalar and 2-vector spaces are supported");
        let scale = 2.0 / (mesh.hx * mesh.hy).sqrt();
        Self { mesh, degree, ncomp, basis: ScalarBasis::new(degree), scale }
    }

    pub fn mesh(&self) -> &CartesianMesh {
        &self.mesh
    }

    pub fn mesh_arc(&self) -> &Arc<CartesianMesh> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn basis(&self) -> &ScalarBasis {
        &self.basis
    }

    /// Scalar basis functions per cell.
    pub fn local_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dofs_per_cell(&self) -> usize {
        self.ncomp * self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.mesh.num_cells() * self.dofs_per_cell()
    }

    pub fn dof(&self, cell: usize, comp: usize, j: usize) -> usize {
        (cell * self.ncomp + comp) * self.basis.len() + j
    }

    /// Physical basis values at a reference point.
    pub fn eval_basis(&self, xi: Point, out: &mut [f64]) {
        self.basis.eval(xi, out);
        out.iter_mut().for_each(|v| *v *= self.scale);
    }

    /// Physical basis values and physical gradients at a reference point.
    pub fn eval_basis_grad(&self, xi: Point, values: &mut [f64], grads: &mut [[f64; 2]]) {
        self.basis.eval_with_grad(xi, values, grads);
        let gx = 2.0 / self.mesh.hx;
        let gy = 2.0 / self.mesh.hy;
        for (v, g) in values.iter_mut().zip(grads.iter_mut()) {
            *v *= self.scale;
            g[0] *= self.scale * gx;
            g[1] *= self.scale * gy;
        }
    }

    /// Tabulates physical basis values (and gradients) at a list of reference points.
    pub fn table(&self, points: &[Point]) -> BasisTable {
        let m = self.local_dim();
        let mut values = vec![0.0; points.len() * m];
        let mut grads = vec![[0.0; 2]; points.len() * m];
        for (q, p) in points.iter().enumerate() {
            self.eval_basis_grad(*p, &mut values[q * m..(q + 1) * m], &mut grads[q * m..(q + 1) * m]);
        }
        BasisTable { m, values, grads }
    }
}

/// Physical basis values at a fixed list of points, flattened as `[point][basis]`.
#[derive(Debug, Clone)]
pub struct BasisTable {
    pub m: usize,
    pub values: Vec<f64>,
    pub grads: Vec<[f64; 2]>,
}

impl BasisTable {
    pub fn values_at(&self, q: usize) -> &[f64] {
        &self.values[q * self.m..(q + 1) * self.m]
    }

    pub fn grads_at(&self, q: usize) -> &[[f64; 2]] {
        &self.grads[q * self.m..(q + 1) * self.m]
    }
}

/// Reference points of a 1D rule placed on one side of the reference square.
pub fn side_points(side: Side, line: &Quadrature) -> Vec<Point> {
    line.points
        .iter()
        .map(|p| {
            let t = p[0];
            match side {
                Side::Left => [-1.0, t],
                Side::Right => [1.0, t],
                Side::Bottom => [t, -1.0],
                Side::Top => [t, 1.0],
            }
        })
        .collect()
}

/// Physical point of a face quadrature node (parameter `t` in [-1, 1]).
pub fn face_point(face: &Face, t: f64) -> Point {
    let h = 0.5 * face.length * t;
    match face.axis {
        crate::mesh::Axis::X => [face.center[0], face.center[1] + h],
        crate::mesh::Axis::Y => [face.center[0] + h, face.center[1]],
    }
}

#[derive(Debug, Clone)]
pub struct DgFunction {
    pub space: DgSpace,
    pub coeffs: Vec<f64>,
}

impl DgFunction {
    pub fn zeros(space: &DgSpace) -> Self {
        Self { coeffs: vec![0.0; space.dim()], space: space.clone() }
    }

    pub fn from_coeffs(space: &DgSpace, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "coefficient vector has length {}, space dimension is {}",
                coeffs.len(),
                space.dim()
            )));
        }
        Ok(Self { space: space.clone(), coeffs })
    }

    pub fn cell_coeffs(&self, cell: usize, comp: usize) -> &[f64] {
        let m = self.space.local_dim();
        let start = self.space.dof(cell, comp, 0);
        &self.coeffs[start..start + m]
    }

    /// Values of all components at a reference point of `cell`.
    pub fn evaluate(&self, cell: usize, xi: Point) -> Result<Vec<f64>> {
        if cell >= self.space.mesh().num_cells() {
            return Err(Error::DimensionMismatch(format!("cell {cell} out of range")));
        }
        let mut phi = vec![0.0; self.space.local_dim()];
        self.space.eval_basis(xi, &mut phi);
        Ok((0..self.space.ncomp())
            .map(|c| self.cell_coeffs(cell, c).iter().zip(&phi).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn evaluate_physical(&self, x: Point) -> Option<Vec<f64>> {
        let cell = self.space.mesh().locate(x)?;
        let xi = self.space.mesh().to_reference(cell, x);
        self.evaluate(cell, xi).ok()
    }

    /// Cell average of one component.
    pub fn cell_mean(&self, cell: usize, comp: usize) -> f64 {
        // int_E phi_0 = sqrt(|E|) and the other basis functions integrate to zero
        self.cell_coeffs(cell, comp)[0] / self.space.mesh().cell_area().sqrt()
    }

    /// Broken L2 norm; exact because the basis is orthonormal.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// L2 projection of `f(x, component)` onto `space`.
pub fn project_l2<F: Fn(Point, usize) -> f64>(space: &DgSpace, f: F) -> DgFunction {
    let mesh = space.mesh();
    let quad = Quadrature::square(2 * space.degree() + 8);
    let table = space.table(&quad.points);
    let jac = 0.25 * mesh.hx * mesh.hy;
    let m = space.local_dim();
    let mut out = DgFunction::zeros(space);
    for cell in 0..mesh.num_cells() {
        for (q, (p, w)) in quad.points.iter().zip(&quad.weights).enumerate() {
            let x = mesh.to_physical(cell, *p);
            let phi = table.values_at(q);
            for c in 0..space.ncomp() {
                let fv = f(x, c) * w * jac;
                let base = space.dof(cell, c, 0);
                for j in 0..m {
                    out.coeffs[base + j] += fv * phi[j];
                }
            }
        }
    }
    out
}

/// Integral of `f` over one cell with a tensor rule exact to `degree`.
pub fn integrate_cell<F: Fn(Point) -> f64>(mesh: &CartesianMesh, cell: usize, degree: usize, f: F) -> f64 {
    let quad = Quadrature::square(degree);
    let jac = 0.25 * mesh.hx * mesh.hy;
    quad.points.iter().zip(&quad.weights).map(|(p, w)| w * jac * f(mesh.to_physical(cell, *p))).sum()
}

pub fn integrate_domain<F: Fn(Point) -> f64>(mesh: &CartesianMesh, degree: usize, f: F) -> f64 {
    (0..mesh.num_cells()).map(|c| integrate_cell(mesh, c, degree, &f)).sum()
}

pub fn integrate_face<F: Fn(Point) -> f64>(face: &Face, degree: usize, f: F) -> f64 {
    let quad = Quadrature::line(degree);
    quad.points.iter().zip(&quad.weights).map(|(p, w)| w * 0.5 * face.length * f(face_point(face, p[0]))).sum()
}

/// `sqrt(sum_c || u_c - exact_c ||^2)` over the domain.
pub fn l2_error<F: Fn(Point, usize) -> f64>(u: &DgFunction, exact: F) -> f64 {
    let space = &u.space;
    let mesh = space.mesh();
    let quad = Quadrature::square(2 * space.degree() + 8);
    let table = space.table(&quad.points);
    let jac = 0.25 * mesh.hx * mesh.hy;
    let mut err = 0.0;
    for cell in 0..mesh.num_cells() {
        for (q, (p, w)) in quad.points.iter().zip(&quad.weights).enumerate() {
            let x = mesh.to_physical(cell, *p);
            let phi = table.values_at(q);
            for c in 0..space.ncomp() {
                let uh: f64 = u.cell_coeffs(cell, c).iter().zip(phi).map(|(a, b)| a * b).sum();
                err += w * jac * (uh - exact(x, c)).powi(2);
            }
        }
    }
    err.sqrt()
}
