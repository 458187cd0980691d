use crate::error::{Error, Result};
use crate::geom::CellPhase;
use crate::mesh::CartesianMesh;
use crate::solver::{FlowState, Interface};
use crate::space::DgSpace;
use crate::vof::MIXED_TOL;

pub const CSV_HEADER: &str = "t,y_c,rise_velocity,circularity,area,mass_drift,div_norm,iters_momentum,iters_pressure";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub y_c: f64,
    pub rise_velocity: f64,
    pub circularity: f64,
    pub area: f64,
    pub mass_drift: f64,
    pub div_norm: f64,
    pub iters_momentum: usize,
    pub iters_pressure: usize,
}

impl DiagnosticsRow {
    /// One CSV line, floats with 15 significant digits.
    pub fn csv_line(&self) -> String {
        format!(
            "{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{},{}",
            self.t,
            self.y_c,
            self.rise_velocity,
            self.circularity,
            self.area,
            self.mass_drift,
            self.div_norm,
            self.iters_momentum,
            self.iters_pressure
        )
    }
}

/// Bubble quantities of `state`; `iface` must be the reconstruction of `state.vof`.
///
/// Center of mass and rise velocity integrate over the PLIC phase-2 polygons
/// of mixed cells and over whole pure bubble cells.
pub fn diagnostics(
    state: &FlowState,
    iface: &Interface,
    initial_mass: f64,
    div_norm: f64,
    iters: (usize, usize),
) -> Result<DiagnosticsRow> {
    let space: &DgSpace = &state.u.space;
    let mesh = space.mesh();
    let area = state.vof.mass(mesh);
    if area <= 0.0 {
        return Err(Error::EmptyBubble);
    }
    let mut m = 0.0;
    let mut my = 0.0;
    let mut uy = 0.0;
    let mut phi = vec![0.0; space.local_dim()];
    for (cell, phase) in iface.geometry.cells.iter().enumerate() {
        match phase {
            CellPhase::Pure(1) => {
                let a = state.vof.chi[cell] * mesh.cell_area();
                m += a;
                my += a * mesh.cell_center(cell)[1];
                uy += mesh.cell_area() * state.u.cell_mean(cell, 1);
            }
            CellPhase::Pure(_) => {}
            CellPhase::Cut(q) => {
                let poly = &q.polygons[1];
                if let Some(c) = poly.centroid() {
                    m += poly.area();
                    my += poly.area() * c[1];
                }
                let coeffs = state.u.cell_coeffs(cell, 1);
                for (x, w) in q.phase[1].points.iter().zip(&q.phase[1].weights) {
                    space.eval_basis(mesh.to_reference(cell, *x), &mut phi);
                    uy += w * phi.iter().zip(coeffs).map(|(a, b)| a * b).sum::<f64>();
                }
            }
        }
    }
    if m <= 0.0 {
        return Err(Error::EmptyBubble);
    }
    let perimeter: f64 = iface.segments.iter().map(|s| s.length()).sum();
    let d_eq = 2.0 * (area / std::f64::consts::PI).sqrt();
    let row = DiagnosticsRow {
        t: state.t,
        y_c: my / m,
        rise_velocity: uy / m,
        circularity: if perimeter > 0.0 { std::f64::consts::PI * d_eq / perimeter } else { 0.0 },
        area,
        mass_drift: if initial_mass > 0.0 { (area - initial_mass) / initial_mass } else { 0.0 },
        div_norm,
        iters_momentum: iters.0,
        iters_pressure: iters.1,
    };
    let floats = [row.t, row.y_c, row.rise_velocity, row.circularity, row.area, row.mass_drift, row.div_norm];
    if floats.iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged(format!("non-finite diagnostics at t = {}", row.t)));
    }
    Ok(row)
}

/// Number of 8-connected components among cells with `chi > MIXED_TOL`.
pub fn bubble_components(mesh: &CartesianMesh, chi: &[f64]) -> usize {
    let n = mesh.num_cells();
    let mut seen = vec![false; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] || chi[start] <= MIXED_TOL {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(c) = stack.pop() {
            let (i, j) = mesh.cell_ij(c);
            for dj in -1isize..=1 {
                for di in -1isize..=1 {
                    let (ii, jj) = (i as isize + di, j as isize + dj);
                    if ii < 0 || jj < 0 || ii >= mesh.nx as isize || jj >= mesh.ny as isize {
                        continue;
                    }
                    let nb = mesh.cell_index(ii as usize, jj as usize);
                    if !seen[nb] && chi[nb] > MIXED_TOL {
                        seen[nb] = true;
                        stack.push(nb);
                    }
                }
            }
        }
    }
    count
}
