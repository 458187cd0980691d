use crate::error::{Error, Result};
use crate::mesh::{CartesianMesh, FaceKind, Point, Side};

/// Physical parameters; index 0 is the surrounding fluid, 1 the bubble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    pub rho: [f64; 2],
    pub mu: [f64; 2],
    pub gravity: Point,
    pub sigma: f64,
}

impl FluidParams {
    pub fn single_phase(rho: f64, mu: f64, gravity: Point) -> Self {
        Self { rho: [rho; 2], mu: [mu; 2], gravity, sigma: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rho.iter().chain(&self.mu).any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Config("densities and viscosities must be positive".into()));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::Config("surface tension must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VelocityBc {
    NoSlip,
    /// Zero normal velocity, zero tangential traction.
    FreeSlip,
    /// Prescribed velocity (also used for outflow of a matching constant state).
    Inflow(Point),
}

/// Velocity boundary conditions per side, indexed like [`Side::ALL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConditions(pub [VelocityBc; 4]);

impl BoundaryConditions {
    pub fn uniform(bc: VelocityBc) -> Self {
        Self([bc; 4])
    }

    /// No-slip top and bottom, free-slip left and right.
    pub fn rising_bubble() -> Self {
        let mut s = [VelocityBc::FreeSlip; 4];
        s[Side::Bottom.index()] = VelocityBc::NoSlip;
        s[Side::Top.index()] = VelocityBc::NoSlip;
        Self(s)
    }

    pub fn get(&self, side: Side) -> VelocityBc {
        self.0[side.index()]
    }

    /// Face classification for velocity component `comp`.
    pub fn component_kinds(&self, mesh: &CartesianMesh, comp: usize) -> Vec<FaceKind> {
        mesh.faces()
            .iter()
            .map(|f| match f.boundary {
                None => FaceKind::Interior,
                Some(side) => match self.get(side) {
                    VelocityBc::NoSlip | VelocityBc::Inflow(_) => FaceKind::Dirichlet,
                    VelocityBc::FreeSlip if side.axis().index() == comp => FaceKind::Dirichlet,
                    VelocityBc::FreeSlip => FaceKind::Neumann,
                },
            })
            .collect()
    }

    /// Face classification for the normal velocity component (Dirichlet on every side here).
    pub fn normal_kinds(&self, mesh: &CartesianMesh) -> Vec<FaceKind> {
        mesh.faces().iter().map(|f| if f.is_interior() { FaceKind::Interior } else { FaceKind::Dirichlet }).collect()
    }

    /// Velocity datum at a boundary point of `side`.
    pub fn datum(&self, side: Side) -> Point {
        match self.get(side) {
            VelocityBc::Inflow(v) => v,
            _ => [0.0, 0.0],
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.0.iter().all(|b| !matches!(b, VelocityBc::Inflow(v) if v[0] != 0.0 || v[1] != 0.0))
    }

    /// Datum as a function of position (sides identified by the outermost faces).
    pub(crate) fn datum_fn<'a>(&'a self, mesh: &'a CartesianMesh) -> impl Fn(Point) -> Point + 'a {
        move |x: Point| {
            let tol = 1e-12 * (mesh.extent[0] + mesh.extent[1]);
            let side = if (x[0] - mesh.origin[0]).abs() < tol {
                Side::Left
            } else if (x[0] - mesh.origin[0] - mesh.extent[0]).abs() < tol {
                Side::Right
            } else if (x[1] - mesh.origin[1]).abs() < tol {
                Side::Bottom
            } else {
                Side::Top
            };
            self.datum(side)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub rtol_momentum: f64,
    pub rtol_pressure: f64,
    pub restart: usize,
    pub max_iter: usize,
    /// Advective Courant number with the `(2k+3)` degree factor.
    pub cfl: f64,
    /// Capillary time-step constant.
    pub sigma_cfl: f64,
    pub dt_max: Option<f64>,
    /// Refactor the ILU(0) preconditioners every this many steps; in between
    /// the factors of an earlier matrix are reused (the iteration still solves
    /// the current system to tolerance).
    pub ilu_refresh: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rtol_momentum: 1e-10,
            rtol_pressure: 1e-12,
            restart: 60,
            max_iter: 2000,
            cfl: 0.2,
            sigma_cfl: 0.5,
            dt_max: None,
            ilu_refresh: 1,
        }
    }
}
