//! Rising-bubble benchmark: configuration, initialization, time loop and output.
//!
//! The domain is `[0,1] x [0,2]` with a bubble of diameter `0.5` centered at
//! `(0.5, 0.5)`, no-slip walls at the top and bottom and free-slip sides.

pub mod config;
pub mod diagnostics;
pub mod output;

use std::path::Path;
use std::sync::Arc;

pub use config::{BenchmarkConfig, Case};
pub use diagnostics::{bubble_components, diagnostics, DiagnosticsRow, CSV_HEADER};
pub use output::{write_segments, write_vtk, DiagnosticsWriter};

use crate::error::{Error, Result};
use crate::mesh::CartesianMesh;
use crate::solver::{BoundaryConditions, FlowState, Solver, StepReport};
use crate::vof::circle_fraction;

pub const BUBBLE_CENTER: [f64; 2] = [0.5, 0.5];
pub const BUBBLE_DIAMETER: f64 = 0.5;

/// Solver and initial state (fluid at rest, exact circle fractions).
pub fn init_case(cfg: &BenchmarkConfig) -> Result<(Solver, FlowState)> {
    cfg.validate()?;
    let mesh = Arc::new(CartesianMesh::new(cfg.nx, cfg.ny, [0.0, 0.0], [1.0, 2.0])?);
    let solver = Solver::new(mesh.clone(), cfg.degree, cfg.case.params(), BoundaryConditions::rising_bubble(), cfg.solver_options())?;
    let state = solver.initial_state(circle_fraction(&mesh, BUBBLE_CENTER, 0.5 * BUBBLE_DIAMETER));
    Ok((solver, state))
}

/// A benchmark run advanced step by step.
pub struct Benchmark {
    pub cfg: BenchmarkConfig,
    pub solver: Solver,
    pub state: FlowState,
    initial_mass: f64,
    last: Option<StepReport>,
}

impl Benchmark {
    pub fn new(cfg: BenchmarkConfig) -> Result<Self> {
        let (solver, state) = init_case(&cfg)?;
        let initial_mass = state.vof.mass(solver.mesh());
        Ok(Self { cfg, solver, state, initial_mass, last: None })
    }

    pub fn finished(&self) -> bool {
        self.state.t >= self.cfg.tend * (1.0 - 1e-12)
    }

    /// One step, shortened to land exactly on the final time.
    pub fn step(&mut self) -> Result<StepReport> {
        let dt = self.solver.stable_dt(&self.state).min(self.cfg.tend - self.state.t);
        let rep = self.solver.step(&mut self.state, dt)?;
        self.last = Some(rep);
        Ok(rep)
    }

    pub fn diagnostics(&self) -> Result<DiagnosticsRow> {
        let iface = self.solver.interface(&self.state.vof);
        let iters = self.last.map_or((0, 0), |r| {
            (r.momentum.map_or(0, |m| m.iterations), r.pressure.map_or(0, |p| p.iterations))
        });
        let div = self.last.map_or(0.0, |r| r.div_norm);
        diagnostics(&self.state, &iface, self.initial_mass, div, iters)
    }

    pub fn write_snapshot(&self, dir: &Path) -> Result<()> {
        let step = self.state.step;
        write_vtk(&dir.join(format!("fields_{step:06}.vtk")), &self.state)?;
        let iface = self.solver.interface(&self.state.vof);
        write_segments(&dir.join(format!("interface_{step:06}.txt")), &iface.segments)
    }
}

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Success,
    IoError,
    ConfigError,
    SolverFailure,
}

impl RunStatus {
    pub fn code(self) -> i32 {
        match self {
            RunStatus::Success => 0,
            RunStatus::IoError => 1,
            RunStatus::ConfigError => 2,
            RunStatus::SolverFailure => 3,
        }
    }

    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::Io(_) => RunStatus::IoError,
            Error::Config(_) => RunStatus::ConfigError,
            _ => RunStatus::SolverFailure,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub error: Option<String>,
    pub rows: Vec<DiagnosticsRow>,
    pub steps: usize,
    /// Largest number of disconnected bubble pieces seen at any output.
    pub max_components: usize,
    pub final_state: Option<FlowState>,
}

/// Runs the configured case to `tend`, writing `diagnostics.csv` and field
/// snapshots into `cfg.outdir`.
pub fn run(cfg: &BenchmarkConfig) -> RunOutcome {
    let mut out = RunOutcome { status: RunStatus::Success, error: None, rows: Vec::new(), steps: 0, max_components: 0, final_state: None };
    if let Err(e) = drive(cfg, &mut out) {
        out.status = RunStatus::of_error(&e);
        out.error = Some(e.to_string());
    }
    out
}

fn drive(cfg: &BenchmarkConfig, out: &mut RunOutcome) -> Result<()> {
    let mut bench = Benchmark::new(cfg.clone())?;
    std::fs::create_dir_all(&cfg.outdir)?;
    let mut writer = DiagnosticsWriter::create(&cfg.outdir.join("diagnostics.csv"))?;
    let mut record = |bench: &Benchmark, out: &mut RunOutcome| -> Result<()> {
        let row = bench.diagnostics()?;
        writer.write(&row)?;
        out.rows.push(row);
        out.max_components = out.max_components.max(bubble_components(bench.solver.mesh(), &bench.state.vof.chi));
        Ok(())
    };
    record(&bench, out)?;
    bench.write_snapshot(&cfg.outdir)?;
    let mut recorded = true;
    while !bench.finished() {
        if let Err(e) = bench.step() {
            // leave the last good state in the diagnostics file
            if !recorded {
                record(&bench, out)?;
            }
            out.steps = bench.state.step;
            return Err(e);
        }
        out.steps = bench.state.step;
        recorded = false;
        if bench.state.step % cfg.out_every == 0 || bench.finished() {
            record(&bench, out)?;
            recorded = true;
        }
        if cfg.snapshot_every > 0 && bench.state.step % cfg.snapshot_every == 0 {
            bench.write_snapshot(&cfg.outdir)?;
        }
    }
    if cfg.snapshot_every == 0 || bench.state.step % cfg.snapshot_every != 0 {
        bench.write_snapshot(&cfg.outdir)?;
    }
    out.final_state = Some(bench.state);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short(dir: &Path, case: Case) -> BenchmarkConfig {
        BenchmarkConfig { case, nx: 8, ny: 16, tend: 0.03, outdir: dir.to_path_buf(), ..Default::default() }
    }

    #[test]
    fn initial_case_matches_setup() {
        let (solver, state) = init_case(&BenchmarkConfig { nx: 16, ny: 32, ..Default::default() }).unwrap();
        assert!((state.vof.mass(solver.mesh()) - std::f64::consts::PI * 0.0625).abs() < 1e-6);
        assert_eq!(state.u.l2_norm(), 0.0);
        assert_eq!(state.p.l2_norm(), 0.0);
        let c = crate::vof::phase_centroid(solver.mesh(), &state.vof).unwrap();
        assert!((c[0] - 0.5).abs() < 1e-6 && (c[1] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn short_run_writes_files_and_reaches_tend() {
        let dir = tempfile::tempdir().unwrap();
        let out = run(&short(dir.path(), Case::One));
        assert_eq!(out.status, RunStatus::Success, "{:?}", out.error);
        let last = out.rows.last().unwrap();
        assert!((last.t - 0.03).abs() < 1e-14);
        assert!(last.rise_velocity > 0.0);
        let csv = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(csv.lines().count(), out.rows.len() + 1);
        assert!(dir.path().join("fields_000000.vtk").exists());
        assert!(dir.path().join(format!("interface_{:06}.txt", out.steps)).exists());
    }

    #[test]
    fn runs_are_deterministic() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let o = run(&short(a.path(), Case::Two));
        assert_eq!(o.status, RunStatus::Success, "{:?}", o.error);
        assert_eq!(run(&short(b.path(), Case::Two)).status, RunStatus::Success);
        let read = |d: &Path| std::fs::read(d.join("diagnostics.csv")).unwrap();
        assert_eq!(read(a.path()), read(b.path()));
    }

    #[test]
    fn solver_failure_reports_status_and_keeps_diagnostics() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = BenchmarkConfig { rtol_pre: 1e-30, ..short(dir.path(), Case::One) };
        let out = run(&cfg);
        assert_eq!(out.status, RunStatus::SolverFailure);
        assert_eq!(out.status.code(), 3);
        let csv = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
        assert!(csv.lines().count() >= 2);
    }

    #[test]
    fn config_errors_map_to_status_two() {
        let dir = tempfile::tempdir().unwrap();
        let out = run(&BenchmarkConfig { tend: -1.0, ..short(dir.path(), Case::One) });
        assert_eq!(out.status.code(), 2);
    }
}
