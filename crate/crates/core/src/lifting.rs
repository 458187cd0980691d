//! Jump liftings and the lifted DG gradient and divergence.
//!
//! For a scalar `v` of degree `s` the lifted gradient lives in `V_{s+1}^2`:
//!
//! ```text
//! grad_a v = grad_h v - R(jump v) - sum_{e in Dirichlet} lift(v - a)
//! <R(jump v), w> = sum_{e interior} int_e jump(v) avg(w) . n_e
//! ```
//!
//! and for a vector `v` of degree `s` the lifted divergence lives in `V_{s-1}`:
//!
//! ```text
//! div_b v = div_h v - M(jump v) - sum_{e in Dirichlet} lift((v - b) . n_e)
//! ```
//!
//! Target bases are orthonormal, so every lifting is read off directly from
//! face integrals against the target basis; no local mass solve is needed.
//! All operators are assembled once as sparse matrices acting on coefficient
//! vectors, and the affine part coming from Dirichlet data is returned as a
//! separate vector.

use crate::error::{Error, Result};
use crate::linsolve::SparseMatrix;
use crate::mesh::{CartesianMesh, FaceKind, Point};
use crate::space::{face_point, side_points, DgFunction, DgSpace, Quadrature};

/// Jump `v(E-) - v(E+)` and average of every component at parameter `t` of an interior face.
pub fn jump_average(v: &DgFunction, face_id: usize, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mesh = v.space.mesh();
    let face = mesh.face(face_id);
    let plus = face.plus.ok_or_else(|| {
        Error::DimensionMismatch(format!("jump/average undefined on boundary face {face_id}"))
    })?;
    let x = face_point(face, t);
    let xm = mesh.to_reference(face.minus, x);
    let xp = mesh.to_reference(plus, x);
    let vm = v.evaluate(face.minus, xm)?;
    let vp = v.evaluate(plus, xp)?;
    let jump = vm.iter().zip(&vp).map(|(a, b)| a - b).collect();
    let avg = vm.iter().zip(&vp).map(|(a, b)| 0.5 * (a + b)).collect();
    Ok((jump, avg))
}

/// Which part of an operator an entry belongs to.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    Broken,
    Lifting,
}

/// Face integrals `int_e phi_i psi_j` between the traces of two bases.
struct FaceCoupling {
    quad: Quadrature,
    src: [crate::space::BasisTable; 4],
    tgt: [crate::space::BasisTable; 4],
}

impl FaceCoupling {
    fn new(src: &DgSpace, tgt: &DgSpace, extra_degree: usize) -> Self {
        let quad = Quadrature::line(src.degree() + tgt.degree() + extra_degree);
        let tab = |sp: &DgSpace| crate::mesh::Side::ALL.map(|s| sp.table(&side_points(s, &quad)));
        Self { src: tab(src), tgt: tab(tgt), quad }
    }

    /// `out[j][i] = int_e psi_j(T side) phi_i(S side)`
    fn integral(&self, length: f64, tside: crate::mesh::Side, sside: crate::mesh::Side) -> Vec<Vec<f64>> {
        let t = &self.tgt[tside.index()];
        let s = &self.src[sside.index()];
        let mut out = vec![vec![0.0; s.m]; t.m];
        for (q, w) in self.quad.weights.iter().enumerate() {
            let wq = w * 0.5 * length;
            let tv = t.values_at(q);
            let sv = s.values_at(q);
            for j in 0..t.m {
                for i in 0..s.m {
                    out[j][i] += wq * tv[j] * sv[i];
                }
            }
        }
        out
    }
}

/// Entries of the lifted gradient of a scalar field, reported as
/// `(part, target cell, direction, target basis, source cell, source basis, value)`.
fn gradient_entries(
    src: &DgSpace,
    tgt: &DgSpace,
    kinds: &[FaceKind],
    mut push: impl FnMut(Part, usize, usize, usize, usize, usize, f64),
) {
    let mesh = src.mesh();
    let (ms, mt) = (src.local_dim(), tgt.local_dim());
    let vq = Quadrature::square(src.degree() + tgt.degree());
    let stab = src.table(&vq.points);
    let ttab = tgt.table(&vq.points);
    let jac = 0.25 * mesh.hx * mesh.hy;
    let mut vol = vec![[0.0; 2]; mt * ms];
    for q in 0..vq.len() {
        let w = vq.weights[q] * jac;
        for j in 0..mt {
            for i in 0..ms {
                let g = stab.grads_at(q)[i];
                vol[j * ms + i][0] += w * g[0] * ttab.values_at(q)[j];
                vol[j * ms + i][1] += w * g[1] * ttab.values_at(q)[j];
            }
        }
    }
    for cell in 0..mesh.num_cells() {
        for d in 0..2 {
            for j in 0..mt {
                for i in 0..ms {
                    let v = vol[j * ms + i][d];
                    if v != 0.0 {
                        push(Part::Broken, cell, d, j, cell, i, v);
                    }
                }
            }
        }
    }
    let fc = FaceCoupling::new(src, tgt, 0);
    for (fid, face) in mesh.faces().iter().enumerate() {
        let d = face.axis.index();
        let n = face.normal[d];
        match (kinds[fid], face.plus) {
            (FaceKind::Interior, Some(plus)) => {
                let sides = [(face.minus, face.minus_side, 1.0), (plus, face.minus_side.opposite(), -1.0)];
                for &(tc, ts, _) in &sides {
                    for &(sc, ss, sgn) in &sides {
                        let int = fc.integral(face.length, ts, ss);
                        for j in 0..mt {
                            for i in 0..ms {
                                push(Part::Lifting, tc, d, j, sc, i, 0.5 * sgn * n * int[j][i]);
                            }
                        }
                    }
                }
            }
            (FaceKind::Dirichlet, None) => {
                let int = fc.integral(face.length, face.minus_side, face.minus_side);
                for j in 0..mt {
                    for i in 0..ms {
                        push(Part::Lifting, face.minus, d, j, face.minus, i, n * int[j][i]);
                    }
                }
            }
            (FaceKind::Neumann, None) => {}
            (k, p) => panic!("face {fid} classified {k:?} but has plus cell {p:?}"),
        }
    }
}

/// `<r, psi_j e_d> = sum_{Dirichlet e} int_e a psi_j n_d`, reported per `(cell, direction, basis)`.
fn gradient_datum_entries<F: Fn(Point) -> f64>(
    tgt: &DgSpace,
    kinds: &[FaceKind],
    datum: F,
    mut push: impl FnMut(usize, usize, usize, f64),
) {
    let mesh = tgt.mesh();
    let quad = Quadrature::line(2 * tgt.degree() + 6);
    let mt = tgt.local_dim();
    let mut psi = vec![0.0; mt];
    for (fid, face) in mesh.faces().iter().enumerate() {
        if kinds[fid] != FaceKind::Dirichlet {
            continue;
        }
        let d = face.axis.index();
        let n = face.normal[d];
        for (p, w) in quad.points.iter().zip(&quad.weights) {
            let x = face_point(face, p[0]);
            let a = datum(x);
            if a == 0.0 {
                continue;
            }
            tgt.eval_basis(mesh.to_reference(face.minus, x), &mut psi);
            for j in 0..mt {
                push(face.minus, d, j, w * 0.5 * face.length * a * n * psi[j]);
            }
        }
    }
}

fn check_degrees(src: &DgSpace, tgt: &DgSpace, expected_tgt: isize) -> Result<()> {
    if tgt.degree() as isize != expected_tgt {
        return Err(Error::DimensionMismatch(format!(
            "lifting from degree {} needs target degree {}, got {}",
            src.degree(),
            expected_tgt,
            tgt.degree()
        )));
    }
    if !std::ptr::eq(src.mesh(), tgt.mesh()) && src.mesh() != tgt.mesh() {
        return Err(Error::DimensionMismatch("source and target live on different meshes".into()));
    }
    Ok(())
}

/// Lifted gradient `V_s -> V_{s+1}^2` with Dirichlet terms on the faces tagged `Dirichlet`.
///
/// With no Dirichlet faces this is the plain lifted gradient; with every
/// boundary face Dirichlet and zero datum it is the homogeneous variant.
#[derive(Debug, Clone)]
pub struct LiftedGradient {
    source: DgSpace,
    target: DgSpace,
    kinds: Vec<FaceKind>,
    /// Full operator `grad_h - R - R_D` (homogeneous data).
    pub matrix: SparseMatrix,
    /// Jump lifting `R + R_D` alone.
    pub lifting: SparseMatrix,
}

impl LiftedGradient {
    pub fn new(source: &DgSpace, target: &DgSpace, kinds: &[FaceKind]) -> Result<Self> {
        if source.ncomp() != 1 || target.ncomp() != 2 {
            return Err(Error::DimensionMismatch("lifted gradient maps scalars to 2-vectors".into()));
        }
        check_degrees(source, target, source.degree() as isize + 1)?;
        let mut full = Vec::new();
        let mut lift = Vec::new();
        gradient_entries(source, target, kinds, |part, tc, d, j, sc, i, v| {
            let row = target.dof(tc, d, j);
            let col = source.dof(sc, 0, i);
            match part {
                Part::Broken => full.push((row, col, v)),
                Part::Lifting => {
                    full.push((row, col, -v));
                    lift.push((row, col, v));
                }
            }
        });
        Ok(Self {
            matrix: SparseMatrix::from_triplets(target.dim(), source.dim(), full)?,
            lifting: SparseMatrix::from_triplets(target.dim(), source.dim(), lift)?,
            source: source.clone(),
            target: target.clone(),
            kinds: kinds.to_vec(),
        })
    }

    pub fn source(&self) -> &DgSpace {
        &self.source
    }

    pub fn target(&self) -> &DgSpace {
        &self.target
    }

    /// Affine part for Dirichlet datum `a`: `grad_a v = matrix * v + inhomogeneity(a)`.
    pub fn inhomogeneity<F: Fn(Point) -> f64>(&self, datum: F) -> Vec<f64> {
        let mut r = vec![0.0; self.target.dim()];
        gradient_datum_entries(&self.target, &self.kinds, datum, |c, d, j, v| r[self.target.dof(c, d, j)] += v);
        r
    }

    pub fn apply(&self, v: &DgFunction) -> DgFunction {
        DgFunction { space: self.target.clone(), coeffs: self.matrix.mul_vec(&v.coeffs) }
    }

    pub fn apply_with_datum<F: Fn(Point) -> f64>(&self, v: &DgFunction, datum: F) -> DgFunction {
        let mut out = self.apply(v);
        for (o, r) in out.coeffs.iter_mut().zip(self.inhomogeneity(datum)) {
            *o += r;
        }
        out
    }

    /// Coefficients of `R(jump v)` (including Dirichlet faces, zero datum).
    pub fn lift_jumps(&self, v: &DgFunction) -> DgFunction {
        DgFunction { space: self.target.clone(), coeffs: self.lifting.mul_vec(&v.coeffs) }
    }
}

/// Lifted divergence `V_s^2 -> V_{s-1}`; `normal_kinds` tags the faces where
/// the normal velocity component carries Dirichlet data.
#[derive(Debug, Clone)]
pub struct LiftedDivergence {
    source: DgSpace,
    target: DgSpace,
    kinds: Vec<FaceKind>,
    pub matrix: SparseMatrix,
    pub lifting: SparseMatrix,
}

impl LiftedDivergence {
    pub fn new(source: &DgSpace, target: &DgSpace, normal_kinds: &[FaceKind]) -> Result<Self> {
        if source.ncomp() != 2 || target.ncomp() != 1 {
            return Err(Error::DimensionMismatch("lifted divergence maps 2-vectors to scalars".into()));
        }
        check_degrees(source, target, source.degree() as isize - 1)?;
        let mesh = source.mesh();
        let (ms, mt) = (source.local_dim(), target.local_dim());
        let mut full = Vec::new();
        let mut lift = Vec::new();

        let vq = Quadrature::square(source.degree() + target.degree());
        let stab = source.table(&vq.points);
        let ttab = target.table(&vq.points);
        let jac = 0.25 * mesh.hx * mesh.hy;
        let mut vol = vec![[0.0; 2]; mt * ms];
        for q in 0..vq.len() {
            let w = vq.weights[q] * jac;
            for j in 0..mt {
                for i in 0..ms {
                    let g = stab.grads_at(q)[i];
                    let t = ttab.values_at(q)[j];
                    vol[j * ms + i][0] += w * g[0] * t;
                    vol[j * ms + i][1] += w * g[1] * t;
                }
            }
        }
        for cell in 0..mesh.num_cells() {
            for c in 0..2 {
                for j in 0..mt {
                    for i in 0..ms {
                        let v = vol[j * ms + i][c];
                        if v != 0.0 {
                            full.push((target.dof(cell, 0, j), source.dof(cell, c, i), v));
                        }
                    }
                }
            }
        }

        let fc = FaceCoupling::new(source, target, 0);
        for (fid, face) in mesh.faces().iter().enumerate() {
            let c = face.axis.index();
            let n = face.normal[c];
            let mut add = |tc: usize, sc: usize, int: &[Vec<f64>], s: f64| {
                // int[j][i] = int psi_j(target) phi_i(source)
                for (j, row) in int.iter().enumerate() {
                    for (i, &v) in row.iter().enumerate() {
                        let (r, col) = (target.dof(tc, 0, j), source.dof(sc, c, i));
                        full.push((r, col, -s * v));
                        lift.push((r, col, s * v));
                    }
                }
            };
            match (normal_kinds[fid], face.plus) {
                (FaceKind::Interior, Some(plus)) => {
                    let sides = [(face.minus, face.minus_side, 1.0), (plus, face.minus_side.opposite(), -1.0)];
                    for &(tc, ts, _) in &sides {
                        for &(sc, ss, sgn) in &sides {
                            let int = fc_flip(&fc, face.length, ts, ss);
                            add(tc, sc, &int, 0.5 * sgn * n);
                        }
                    }
                }
                (FaceKind::Dirichlet, None) => {
                    let int = fc_flip(&fc, face.length, face.minus_side, face.minus_side);
                    add(face.minus, face.minus, &int, n);
                }
                (FaceKind::Neumann, None) => {}
                (k, p) => panic!("face {fid} classified {k:?} but has plus cell {p:?}"),
            }
        }
        Ok(Self {
            matrix: SparseMatrix::from_triplets(target.dim(), source.dim(), full)?,
            lifting: SparseMatrix::from_triplets(target.dim(), source.dim(), lift)?,
            source: source.clone(),
            target: target.clone(),
            kinds: normal_kinds.to_vec(),
        })
    }

    pub fn source(&self) -> &DgSpace {
        &self.source
    }

    pub fn target(&self) -> &DgSpace {
        &self.target
    }

    /// Affine part for Dirichlet datum `b`: `div_b v = matrix * v + inhomogeneity(b)`.
    pub fn inhomogeneity<F: Fn(Point) -> [f64; 2]>(&self, datum: F) -> Vec<f64> {
        let mesh = self.target.mesh();
        let quad = Quadrature::line(2 * self.target.degree() + 6);
        let mt = self.target.local_dim();
        let mut r = vec![0.0; self.target.dim()];
        let mut phi = vec![0.0; mt];
        for (fid, face) in mesh.faces().iter().enumerate() {
            if self.kinds[fid] != FaceKind::Dirichlet {
                continue;
            }
            for (p, w) in quad.points.iter().zip(&quad.weights) {
                let x = face_point(face, p[0]);
                let b = datum(x);
                let bn = b[0] * face.normal[0] + b[1] * face.normal[1];
                if bn == 0.0 {
                    continue;
                }
                self.target.eval_basis(mesh.to_reference(face.minus, x), &mut phi);
                for j in 0..mt {
                    r[self.target.dof(face.minus, 0, j)] += w * 0.5 * face.length * bn * phi[j];
                }
            }
        }
        r
    }

    pub fn apply(&self, v: &DgFunction) -> DgFunction {
        DgFunction { space: self.target.clone(), coeffs: self.matrix.mul_vec(&v.coeffs) }
    }

    pub fn lift_jumps(&self, v: &DgFunction) -> DgFunction {
        DgFunction { space: self.target.clone(), coeffs: self.lifting.mul_vec(&v.coeffs) }
    }
}

// FaceCoupling is built with (source, target) bases; for the divergence the
// roles in the integral are the same, only the naming differs.
fn fc_flip(fc: &FaceCoupling, length: f64, tside: crate::mesh::Side, sside: crate::mesh::Side) -> Vec<Vec<f64>> {
    fc.integral(length, tside, sside)
}

/// Componentwise lifted gradient of a velocity field, `V_s^2 -> V_{s+1}^{2x2}`.
///
/// Rows are laid out `[cell][component][direction][basis]`, columns follow the
/// velocity layout `[cell][component][basis]`. Component `c` uses `kinds[c]`.
#[derive(Debug, Clone)]
pub struct LiftedTensorGradient {
    source: DgSpace,
    target_local_dim: usize,
    kinds: [Vec<FaceKind>; 2],
    target: DgSpace,
    pub matrix: SparseMatrix,
}

impl LiftedTensorGradient {
    pub fn new(source: &DgSpace, kinds: [Vec<FaceKind>; 2]) -> Result<Self> {
        if source.ncomp() != 2 {
            return Err(Error::DimensionMismatch("tensor gradient needs a vector source".into()));
        }
        let scalar_src = DgSpace::new(source.mesh_arc().clone(), source.degree(), 1);
        let target = DgSpace::new(source.mesh_arc().clone(), source.degree() + 1, 2);
        let mt = target.local_dim();
        let nrows = source.mesh().num_cells() * 4 * mt;
        let mut t = Vec::new();
        for (c, kc) in kinds.iter().enumerate() {
            gradient_entries(&scalar_src, &target, kc, |part, tc, d, j, sc, i, v| {
                let row = ((tc * 2 + c) * 2 + d) * mt + j;
                let col = source.dof(sc, c, i);
                t.push((row, col, if part == Part::Broken { v } else { -v }));
            });
        }
        Ok(Self {
            matrix: SparseMatrix::from_triplets(nrows, source.dim(), t)?,
            source: source.clone(),
            target_local_dim: mt,
            kinds,
            target,
        })
    }

    pub fn source(&self) -> &DgSpace {
        &self.source
    }

    pub fn target_local_dim(&self) -> usize {
        self.target_local_dim
    }

    pub fn row(&self, cell: usize, comp: usize, dir: usize, j: usize) -> usize {
        ((cell * 2 + comp) * 2 + dir) * self.target_local_dim + j
    }

    /// Affine part for a velocity datum on the Dirichlet faces of each component.
    pub fn inhomogeneity<F: Fn(Point) -> [f64; 2]>(&self, datum: F) -> Vec<f64> {
        let mut r = vec![0.0; self.matrix.nrows()];
        for c in 0..2 {
            gradient_datum_entries(&self.target, &self.kinds[c], |x| datum(x)[c], |cell, d, j, v| {
                r[self.row(cell, c, d, j)] += v;
            });
        }
        r
    }
}

/// The four liftings of the pressure/velocity pair: `R`, `R_0`, `M`, `M_0`
/// together with their full lifted derivatives.
#[derive(Debug, Clone)]
pub struct LiftingSet {
    /// Lifted gradient without boundary terms.
    pub grad: LiftedGradient,
    /// Lifted gradient with homogeneous Dirichlet data on `dirichlet_kinds`.
    pub grad0: LiftedGradient,
    pub div: LiftedDivergence,
    pub div0: LiftedDivergence,
}

/// Assembles all four liftings between `V_k` and `V_{k+1}^2`.
pub fn assemble_lifting_matrices(
    scalar: &DgSpace,
    vector: &DgSpace,
    dirichlet_kinds: &[FaceKind],
) -> Result<LiftingSet> {
    let mesh: &CartesianMesh = scalar.mesh();
    let interior_only: Vec<FaceKind> = mesh
        .faces()
        .iter()
        .map(|f| if f.is_interior() { FaceKind::Interior } else { FaceKind::Neumann })
        .collect();
    Ok(LiftingSet {
        grad: LiftedGradient::new(scalar, vector, &interior_only)?,
        grad0: LiftedGradient::new(scalar, vector, dirichlet_kinds)?,
        div: LiftedDivergence::new(vector, scalar, &interior_only)?,
        div0: LiftedDivergence::new(vector, scalar, dirichlet_kinds)?,
    })
}
