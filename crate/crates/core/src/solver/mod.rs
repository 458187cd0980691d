//! Two-phase pressure-correction time stepping.
//!
//! One step, with `V = V_{k+1}^2` for the velocity and `Q = V_k` for pressure:
//!
//! 1. transport the volume fraction with `u^n`, reconstruct the interface,
//!    curvature and cut-cell quadratures;
//! 2. explicit advection `u_hat = u^n + dt (A(u^n) + g)` (density free);
//! 3. momentum: `<rho (u* - u_hat)/dt, v> + <2 mu D(u*), D(v)> = -<grad p^n, v> + F_sigma(v)`,
//!    with `D` the symmetric part of the componentwise lifted gradient `grad_a`;
//! 4. pressure: `<(1/rho) grad p*, grad q> = (1/dt) <div_b u*, q>`;
//! 5. update: `u^{n+1} = u* + dt P_rho(grad p* / rho)`, `p^{n+1} = p^n - p*`.
//!
//! With the lifted divergence equal to minus the adjoint of the lifted
//! gradient, step 5 makes `div_b u^{n+1}` vanish up to the pressure solver
//! tolerance. The pressure increment enters with a minus sign: written this
//! way `-grad p*` is the physical pressure-gradient increment.
//!
//! Phase-dependent matrices are the phase-1 matrix plus corrections on the
//! cells that are cut or filled by phase 2.

pub mod explicit;
pub mod gram;
pub mod params;
pub mod poisson;

use std::sync::Arc;

use nalgebra::DMatrix;

pub use explicit::{explicit_advection_step, max_speed};
pub use gram::GramAssembler;
pub use params::{BoundaryConditions, FluidParams, SolverOptions, VelocityBc};
pub use poisson::{poisson_matrix, poisson_solve};

use crate::error::{Error, Result};
use crate::geom::{phase_mass_matrix, CellPhase, PhaseGeometry};
use crate::lifting::{LiftedDivergence, LiftedGradient, LiftedTensorGradient};
use crate::linsolve::{gmres, CoarseCorrection, CoarseVector, GmresOptions, Ilu0, SolverReport, SparseMatrix};
use crate::mesh::{CartesianMesh, FaceKind, Side};
use crate::space::{DgFunction, DgSpace};
use crate::vof::{self, PlicSegment, VofField};

#[derive(Debug, Clone)]
pub struct FlowState {
    pub u: DgFunction,
    pub p: DgFunction,
    pub vof: VofField,
    pub t: f64,
    pub step: usize,
}

/// Interface data for one step.
#[derive(Debug, Clone)]
pub struct Interface {
    pub segments: Vec<PlicSegment>,
    pub curvature: Vec<f64>,
    pub geometry: PhaseGeometry,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    pub momentum: Option<SolverReport>,
    pub pressure: Option<SolverReport>,
    pub vof: vof::AdvectReport,
    pub div_norm: f64,
}

/// Operators and scratch data for one mesh, degree and boundary setup.
#[derive(Debug)]
pub struct Solver {
    mesh: Arc<CartesianMesh>,
    degree: usize,
    pub params: FluidParams,
    pub bcs: BoundaryConditions,
    pub options: SolverOptions,
    pspace: DgSpace,
    uspace: DgSpace,
    /// Scalar space of degree `k + 2` for viscosity weights.
    sspace: DgSpace,
    grad: LiftedGradient,
    div: LiftedDivergence,
    div_rhs: Vec<f64>,
    /// Strain rows `[cell][xx, yy, xy + yx][basis]` of the lifted velocity gradient.
    strain: SparseMatrix,
    strain_rhs: Vec<f64>,
    viscous: GramAssembler,
    pressure_gram: GramAssembler,
    momentum_matrix: SparseMatrix,
    pressure_matrix: SparseMatrix,
    momentum_ilu: LaggedIlu,
    pressure_ilu: LaggedIlu,
    pressure_pin_dof: Option<usize>,
    last_pstar: Vec<f64>,
}

fn strain_operator(t: &LiftedTensorGradient, ncells: usize) -> Result<SparseMatrix> {
    let mt = t.target_local_dim();
    let mut trip = Vec::new();
    for cell in 0..ncells {
        for j in 0..mt {
            let rows = [(0, 0, 0), (1, 1, 1), (2, 0, 1), (2, 1, 0)];
            for (s, c, d) in rows {
                let (cols, vals) = t.matrix.row(t.row(cell, c, d, j));
                for (&col, &v) in cols.iter().zip(vals) {
                    trip.push(((cell * 3 + s) * mt + j, col, v));
                }
            }
        }
    }
    SparseMatrix::from_triplets(ncells * 3 * mt, t.matrix.ncols(), trip)
}

fn strain_vector(t: &LiftedTensorGradient, v: &[f64], ncells: usize) -> Vec<f64> {
    let mt = t.target_local_dim();
    let mut out = vec![0.0; ncells * 3 * mt];
    for cell in 0..ncells {
        for j in 0..mt {
            out[(cell * 3) * mt + j] = v[t.row(cell, 0, 0, j)];
            out[(cell * 3 + 1) * mt + j] = v[t.row(cell, 1, 1, j)];
            out[(cell * 3 + 2) * mt + j] = v[t.row(cell, 0, 1, j)] + v[t.row(cell, 1, 0, j)];
        }
    }
    out
}

/// ILU(0) factors reused across steps. They are rebuilt every `refresh`
/// solves, or sooner once a solve needs more than twice the iterations of the
/// first solve after the last rebuild.
#[derive(Debug, Clone, Default)]
struct LaggedIlu {
    ilu: Option<Ilu0>,
    since: usize,
    fresh_iterations: usize,
    last_iterations: usize,
}

impl LaggedIlu {
    fn get(&mut self, a: &SparseMatrix, refresh: usize) -> Result<&Ilu0> {
        let stale = self.last_iterations > 2 * self.fresh_iterations.max(1);
        match &mut self.ilu {
            Some(_) if self.since + 1 < refresh.max(1) && !stale => self.since += 1,
            Some(f) => {
                f.refactor(a)?;
                self.since = 0;
            }
            None => {
                self.ilu = Some(Ilu0::new(a)?);
                self.since = 0;
            }
        }
        Ok(self.ilu.as_ref().unwrap())
    }

    fn record(&mut self, iterations: usize) {
        if self.since == 0 {
            self.fresh_iterations = iterations;
        }
        self.last_iterations = iterations;
    }

    fn reset(&mut self) {
        *self = Self::default();
    }
}

/// Constant pressure on each connected region of either phase, as a coarse
/// space for the pressure solve. Isolated pockets of the light phase are
/// near-null modes of the `1/rho`-weighted operator at large density ratios.
fn phase_constants(mesh: &CartesianMesh, pspace: &DgSpace, geom: &PhaseGeometry, pin: usize) -> Vec<CoarseVector> {
    let label: Vec<usize> = geom
        .cells
        .iter()
        .map(|c| match c {
            CellPhase::Pure(p) => *p,
            CellPhase::Cut(cq) => {
                let area = |k: usize| cq.phase[k].weights.iter().sum::<f64>();
                usize::from(area(1) > area(0))
            }
        })
        .collect();
    let mut seen = vec![false; label.len()];
    let mut basis = Vec::new();
    for start in 0..label.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut region = Vec::new();
        while let Some(c) = stack.pop() {
            let dof = pspace.dof(c, 0, 0);
            if dof != pin {
                region.push((dof, 1.0));
            }
            for side in [Side::Left, Side::Right, Side::Bottom, Side::Top] {
                if let Some(nb) = mesh.neighbor(c, side) {
                    if !seen[nb] && label[nb] == label[c] {
                        seen[nb] = true;
                        stack.push(nb);
                    }
                }
            }
        }
        if !region.is_empty() {
            basis.push(region);
        }
    }
    basis
}

/// Block-diagonal expansion `diag(s_0 W, s_1 W, ...)`.
fn block_diag(w: &DMatrix<f64>, scales: &[f64]) -> DMatrix<f64> {
    let m = w.nrows();
    let mut out = DMatrix::zeros(m * scales.len(), m * scales.len());
    for (b, s) in scales.iter().enumerate() {
        out.view_mut((b * m, b * m), (m, m)).copy_from(&(w * *s));
    }
    out
}

impl Solver {
    pub fn new(
        mesh: Arc<CartesianMesh>,
        degree: usize,
        params: FluidParams,
        bcs: BoundaryConditions,
        options: SolverOptions,
    ) -> Result<Self> {
        params.validate()?;
        let pspace = DgSpace::new(mesh.clone(), degree, 1);
        let uspace = DgSpace::new(mesh.clone(), degree + 1, 2);
        let sspace = DgSpace::new(mesh.clone(), degree + 2, 1);
        let interior: Vec<FaceKind> =
            mesh.faces().iter().map(|f| if f.is_interior() { FaceKind::Interior } else { FaceKind::Neumann }).collect();
        let grad = LiftedGradient::new(&pspace, &uspace, &interior)?;
        let div = LiftedDivergence::new(&uspace, &pspace, &bcs.normal_kinds(&mesh))?;
        let datum = bcs.datum_fn(&mesh);
        let div_rhs = div.inhomogeneity(&datum);
        let kinds = [bcs.component_kinds(&mesh, 0), bcs.component_kinds(&mesh, 1)];
        let tensor = LiftedTensorGradient::new(&uspace, kinds)?;
        let ncells = mesh.num_cells();
        let strain = strain_operator(&tensor, ncells)?;
        let strain_rhs = strain_vector(&tensor, &tensor.inhomogeneity(&datum), ncells);
        let mt = sspace.local_dim();
        let mut vw = vec![2.0; 3 * mt];
        vw[2 * mt..].iter_mut().for_each(|v| *v = 1.0);
        let viscous = GramAssembler::new(&strain, 3 * mt, &vw);
        let pressure_gram = GramAssembler::new(&grad.matrix, uspace.dofs_per_cell(), &vec![1.0; uspace.dofs_per_cell()]);
        let momentum_matrix = viscous.base().clone();
        let pressure_matrix = pressure_gram.base().clone();
        let np = pspace.dim();
        drop(datum);
        Ok(Self {
            mesh,
            degree,
            params,
            bcs,
            options,
            pspace,
            uspace,
            sspace,
            grad,
            div,
            div_rhs,
            strain,
            strain_rhs,
            viscous,
            pressure_gram,
            momentum_matrix,
            pressure_matrix,
            momentum_ilu: LaggedIlu::default(),
            pressure_ilu: LaggedIlu::default(),
            pressure_pin_dof: None,
            last_pstar: vec![0.0; np],
        })
    }

    pub fn mesh(&self) -> &CartesianMesh {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn pressure_space(&self) -> &DgSpace {
        &self.pspace
    }

    pub fn velocity_space(&self) -> &DgSpace {
        &self.uspace
    }

    pub fn lifted_gradient(&self) -> &LiftedGradient {
        &self.grad
    }

    pub fn lifted_divergence(&self) -> &LiftedDivergence {
        &self.div
    }

    /// Fluid at rest with zero pressure.
    pub fn initial_state(&self, vof: VofField) -> FlowState {
        FlowState { u: DgFunction::zeros(&self.uspace), p: DgFunction::zeros(&self.pspace), vof, t: 0.0, step: 0 }
    }

    /// PLIC segments, curvature and cut-cell quadratures of a fraction field.
    pub fn interface(&self, vof: &VofField) -> Interface {
        let segments = vof::reconstruct_plic(&self.mesh, vof);
        let curvature = vof::curvature(&self.mesh, vof, &segments);
        let geometry = PhaseGeometry::build(&self.mesh, &vof.chi, &segments, 2 * self.degree + 4);
        Interface { segments, curvature, geometry }
    }

    /// `div_b u` coefficients.
    pub fn divergence(&self, u: &DgFunction) -> Vec<f64> {
        let mut d = self.div.matrix.mul_vec(&u.coeffs);
        for (a, b) in d.iter_mut().zip(&self.div_rhs) {
            *a += b;
        }
        d
    }

    /// `||div_b u||_{L2}`.
    pub fn divergence_norm(&self, u: &DgFunction) -> f64 {
        self.divergence(u).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Face velocities for the volume-fraction transport.
    pub fn face_velocities(&self, u: &DgFunction) -> Vec<f64> {
        let mut v = vof::face_velocities(u);
        for (fid, f) in self.mesh.faces().iter().enumerate() {
            if let Some(side) = f.boundary {
                v[fid] = self.bcs.datum(side)[f.axis.index()];
            }
        }
        v
    }

    /// Largest stable time step for the current state.
    pub fn stable_dt(&self, state: &FlowState) -> f64 {
        let h = self.mesh.h_min();
        let mut dt = self.options.dt_max.unwrap_or(f64::INFINITY);
        let speed = max_speed(&state.u);
        if speed > 0.0 {
            dt = dt.min(self.options.cfl * h / ((2 * self.degree + 3) as f64 * speed));
        }
        let fmax = self.face_velocities(&state.u).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if fmax > 0.0 {
            dt = dt.min(0.5 * h / fmax);
        }
        let p = &self.params;
        if p.sigma > 0.0 {
            let rs = p.rho[0] + p.rho[1];
            dt = dt.min(self.options.sigma_cfl * (rs * h.powi(3) / (4.0 * std::f64::consts::PI * p.sigma)).sqrt());
        }
        assert!(dt.is_finite(), "no time-step restriction applies; set dt_max");
        dt
    }

    pub fn explicit_advection_step(&self, u: &DgFunction, dt: f64) -> Result<DgFunction> {
        explicit_advection_step(u, &self.bcs, self.params.gravity, dt, self.options.cfl)
    }

    fn viscosity_weight(&self, cell: usize, phase: &CellPhase) -> DMatrix<f64> {
        phase_mass_matrix(&self.sspace, cell, phase, self.params.mu)
    }

    /// `sum_gamma int -sigma kappa psi . nu` with `nu` pointing out of phase 2.
    pub fn surface_tension(&self, iface: &Interface) -> Vec<f64> {
        let mut f = vec![0.0; self.uspace.dim()];
        let sigma = self.params.sigma;
        if sigma == 0.0 {
            return f;
        }
        let m = self.uspace.local_dim();
        let mut psi = vec![0.0; m];
        for cq in iface.geometry.cut_cells() {
            let s = -sigma * iface.curvature[cq.cell];
            for (p, w) in cq.interface.points.iter().zip(&cq.interface.weights) {
                self.uspace.eval_basis(self.mesh.to_reference(cq.cell, *p), &mut psi);
                for c in 0..2 {
                    for i in 0..m {
                        f[self.uspace.dof(cq.cell, c, i)] += s * w * psi[i] * cq.normal[c];
                    }
                }
            }
        }
        f
    }

    fn assemble_momentum(&mut self, geom: &PhaseGeometry, dt: f64) {
        let (rho1, mu1) = (self.params.rho[0], self.params.mu[0]);
        let base = self.viscous.base();
        let vals = self.momentum_matrix.values_mut();
        for (v, b) in vals.iter_mut().zip(base.values()) {
            *v = mu1 * b;
        }
        let n = self.uspace.dim();
        let mu_ref = DMatrix::identity(self.sspace.local_dim(), self.sspace.local_dim()) * mu1;
        let rho_ref = DMatrix::identity(self.uspace.local_dim(), self.uspace.local_dim()) * rho1;
        let m = self.uspace.local_dim();
        for i in 0..n {
            let p = self.momentum_matrix.position(i, i).expect("diagonal in pattern");
            self.momentum_matrix.values_mut()[p] += rho1 / dt;
        }
        for (cell, phase) in geom.cells.iter().enumerate() {
            if matches!(phase, CellPhase::Pure(0)) {
                continue;
            }
            let dmu = self.viscosity_weight(cell, phase) - &mu_ref;
            self.viscous.add_cell(&mut self.momentum_matrix, cell, &block_diag(&dmu, &[2.0, 2.0, 1.0]), 1.0);
            let drho = phase_mass_matrix(&self.uspace, cell, phase, self.params.rho) - &rho_ref;
            for c in 0..2 {
                for a in 0..m {
                    let r = self.uspace.dof(cell, c, a);
                    for b in 0..m {
                        let col = self.uspace.dof(cell, c, b);
                        let p = self.momentum_matrix.position(r, col).expect("cell block in pattern");
                        self.momentum_matrix.values_mut()[p] += drho[(a, b)] / dt;
                    }
                }
            }
        }
    }

    /// Applies the phase-weighted block mass matrix to a velocity coefficient vector.
    fn weighted_mass(&self, geom: &PhaseGeometry, coef: [f64; 2], v: &[f64]) -> Vec<f64> {
        let m = self.uspace.local_dim();
        let mut out = vec![0.0; v.len()];
        for (cell, phase) in geom.cells.iter().enumerate() {
            match phase {
                CellPhase::Pure(p) => {
                    for c in 0..2 {
                        let s = self.uspace.dof(cell, c, 0);
                        for i in 0..m {
                            out[s + i] = coef[*p] * v[s + i];
                        }
                    }
                }
                CellPhase::Cut(_) => {
                    let w = phase_mass_matrix(&self.uspace, cell, phase, coef);
                    for c in 0..2 {
                        let s = self.uspace.dof(cell, c, 0);
                        let x = nalgebra::DVector::from_column_slice(&v[s..s + m]);
                        let y = &w * x;
                        out[s..s + m].copy_from_slice(y.as_slice());
                    }
                }
            }
        }
        out
    }

    pub fn implicit_momentum_step(
        &mut self,
        u_hat: &DgFunction,
        p: &DgFunction,
        iface: &Interface,
        dt: f64,
        guess: &DgFunction,
    ) -> Result<(DgFunction, SolverReport)> {
        self.assemble_momentum(&iface.geometry, dt);
        let mut rhs = self.weighted_mass(&iface.geometry, self.params.rho, &u_hat.coeffs);
        rhs.iter_mut().for_each(|v| *v /= dt);
        let gp = self.grad.matrix.mul_vec(&p.coeffs);
        let fs = self.surface_tension(iface);
        for ((r, g), f) in rhs.iter_mut().zip(&gp).zip(&fs) {
            *r += f - g;
        }
        if !self.bcs.is_homogeneous() {
            // -<2 mu D(lift of data), D(v)>
            let mt = self.sspace.local_dim();
            let mut w_rs = vec![0.0; self.strain_rhs.len()];
            for (cell, phase) in iface.geometry.cells.iter().enumerate() {
                let w = block_diag(&self.viscosity_weight(cell, phase), &[2.0, 2.0, 1.0]);
                let r = 3 * mt * cell..3 * mt * (cell + 1);
                let x = nalgebra::DVector::from_column_slice(&self.strain_rhs[r.clone()]);
                w_rs[r].copy_from_slice((w * x).as_slice());
            }
            let mut lift = vec![0.0; rhs.len()];
            self.strain.apply_transpose_add(&w_rs, &mut lift);
            for (r, l) in rhs.iter_mut().zip(lift) {
                *r -= l;
            }
        }
        let ilu = self.momentum_ilu.get(&self.momentum_matrix, self.options.ilu_refresh)?;
        let opts = GmresOptions { rtol: self.options.rtol_momentum, restart: self.options.restart, max_iter: self.options.max_iter };
        let mut x = guess.coeffs.clone();
        let rep = gmres(&self.momentum_matrix, &rhs, &mut x, ilu, &opts);
        self.momentum_ilu.record(rep.iterations);
        if !rep.converged {
            return Err(Error::NotConverged { what: "momentum", iterations: rep.iterations, residual: rep.residual });
        }
        Ok((DgFunction::from_coeffs(&self.uspace, x)?, rep))
    }

    /// Mean dof of a cell in the lighter phase. Fixing the pressure there keeps
    /// the large entries of `1/rho` rows acting on small values, which lowers
    /// the round-off floor of the residual for large density ratios.
    fn pressure_pin(&self, geom: &PhaseGeometry) -> usize {
        let light = match self.params.rho[1].partial_cmp(&self.params.rho[0]) {
            Some(std::cmp::Ordering::Less) => 1,
            Some(std::cmp::Ordering::Greater) => 0,
            _ => return self.pspace.dof(0, 0, 0),
        };
        let cell = geom.cells.iter().position(|c| matches!(c, CellPhase::Pure(p) if *p == light)).unwrap_or(0);
        self.pspace.dof(cell, 0, 0)
    }

    fn assemble_pressure(&mut self, geom: &PhaseGeometry) -> usize {
        let inv1 = 1.0 / self.params.rho[0];
        let inv = [inv1, 1.0 / self.params.rho[1]];
        for (v, b) in self.pressure_matrix.values_mut().iter_mut().zip(self.pressure_gram.base().values()) {
            *v = inv1 * b;
        }
        let m = self.uspace.local_dim();
        let reference = DMatrix::identity(m, m) * inv1;
        for (cell, phase) in geom.cells.iter().enumerate() {
            if matches!(phase, CellPhase::Pure(0)) {
                continue;
            }
            let dw = phase_mass_matrix(&self.uspace, cell, phase, inv) - &reference;
            self.pressure_gram.add_cell(&mut self.pressure_matrix, cell, &block_diag(&dw, &[1.0, 1.0]), 1.0);
        }
        let pin = self.pressure_pin(geom);
        self.pressure_matrix.pin_dof(pin);
        pin
    }

    /// Coefficient vector of the constant function normalized to unit length.
    fn constant_mode(&self) -> Vec<f64> {
        let mut z = vec![0.0; self.pspace.dim()];
        let s = 1.0 / (self.mesh.num_cells() as f64).sqrt();
        for cell in 0..self.mesh.num_cells() {
            z[self.pspace.dof(cell, 0, 0)] = s;
        }
        z
    }

    fn remove_constant(&self, v: &mut [f64]) {
        let z = self.constant_mode();
        let a: f64 = v.iter().zip(&z).map(|(x, y)| x * y).sum();
        for (x, y) in v.iter_mut().zip(&z) {
            *x -= a * y;
        }
    }

    /// Residual of `<(1/rho) grad p, grad q> = (1/dt) <div_b u, q>` relative to the right-hand side.
    pub fn pressure_residual(&mut self, u_star: &DgFunction, p_star: &DgFunction, iface: &Interface, dt: f64) -> f64 {
        let mut rhs = self.divergence(u_star);
        rhs.iter_mut().for_each(|v| *v /= dt);
        self.remove_constant(&mut rhs);
        let gp = self.grad.matrix.mul_vec(&p_star.coeffs);
        let wgp = self.weighted_mass(&iface.geometry, [1.0 / self.params.rho[0], 1.0 / self.params.rho[1]], &gp);
        let mut lhs = vec![0.0; rhs.len()];
        self.grad.matrix.apply_transpose_add(&wgp, &mut lhs);
        let num = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let den = rhs.iter().map(|b| b * b).sum::<f64>().sqrt();
        if den == 0.0 { num } else { num / den }
    }

    pub fn pressure_poisson_step(&mut self, u_star: &DgFunction, iface: &Interface, dt: f64) -> Result<(DgFunction, SolverReport)> {
        let pin = self.assemble_pressure(&iface.geometry);
        let mut rhs = self.divergence(u_star);
        rhs.iter_mut().for_each(|v| *v /= dt);
        self.remove_constant(&mut rhs);
        rhs[pin] = 0.0;
        if self.pressure_pin_dof != Some(pin) {
            // factors of a matrix pinned elsewhere make a poor preconditioner
            self.pressure_ilu.reset();
            self.pressure_pin_dof = Some(pin);
        }
        let ilu = self.pressure_ilu.get(&self.pressure_matrix, self.options.ilu_refresh)?;
        let opts = GmresOptions { rtol: self.options.rtol_pressure, restart: self.options.restart, max_iter: self.options.max_iter };
        // shift the previous increment so that it vanishes at the pinned dof
        let mut x = self.last_pstar.clone();
        let shift = x[pin];
        for cell in 0..self.mesh.num_cells() {
            x[self.pspace.dof(cell, 0, 0)] -= shift;
        }
        let basis = phase_constants(&self.mesh, &self.pspace, &iface.geometry, pin);
        let rep = match CoarseCorrection::new(&self.pressure_matrix, ilu, basis) {
            Some(two) => gmres(&self.pressure_matrix, &rhs, &mut x, &two, &opts),
            None => gmres(&self.pressure_matrix, &rhs, &mut x, ilu, &opts),
        };
        self.pressure_ilu.record(rep.iterations);
        if !rep.converged {
            return Err(Error::NotConverged { what: "pressure", iterations: rep.iterations, residual: rep.residual });
        }
        self.remove_constant(&mut x);
        self.last_pstar.clone_from(&x);
        Ok((DgFunction::from_coeffs(&self.pspace, x)?, rep))
    }

    /// `u^{n+1} = u* + dt P(grad p* / rho)`, `p^{n+1} = p^n - p*`.
    pub fn update_step(
        &self,
        u_star: &DgFunction,
        p_star: &DgFunction,
        p: &DgFunction,
        iface: &Interface,
        dt: f64,
    ) -> (DgFunction, DgFunction) {
        let gp = self.grad.matrix.mul_vec(&p_star.coeffs);
        let corr = self.weighted_mass(&iface.geometry, [1.0 / self.params.rho[0], 1.0 / self.params.rho[1]], &gp);
        let mut u = u_star.clone();
        for (a, c) in u.coeffs.iter_mut().zip(corr) {
            *a += dt * c;
        }
        let mut pn = p.clone();
        for (a, b) in pn.coeffs.iter_mut().zip(&p_star.coeffs) {
            *a -= b;
        }
        (u, pn)
    }

    /// Advances `state` by `dt`.
    pub fn step(&mut self, state: &mut FlowState, dt: f64) -> Result<StepReport> {
        let fv = self.face_velocities(&state.u);
        let (vof_new, vof_rep) = vof::advect(&self.mesh, &state.vof, &fv, dt, state.step.is_multiple_of(2))?;
        let mut vof_new = vof_new;
        let iface = self.interface(&vof_new);
        vof_new.remember_normals(&iface.segments);
        let u_hat = self.explicit_advection_step(&state.u, dt)?;
        let (u_star, mrep) = self.implicit_momentum_step(&u_hat, &state.p, &iface, dt, &state.u)?;
        let (p_star, prep) = self.pressure_poisson_step(&u_star, &iface, dt)?;
        let (u, p) = self.update_step(&u_star, &p_star, &state.p, &iface, dt);
        state.u = u;
        state.p = p;
        state.vof = vof_new;
        state.t += dt;
        state.step += 1;
        Ok(StepReport {
            dt,
            momentum: Some(mrep),
            pressure: Some(prep),
            vof: vof_rep,
            div_norm: self.divergence_norm(&state.u),
        })
    }
}
