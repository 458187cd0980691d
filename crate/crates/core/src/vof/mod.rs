//! Volume-of-fluid phase tracking.
//!
//! `chi` is the volume fraction of phase 2 (the bubble). Interfaces are
//! piecewise-linear (PLIC) segments with unit normal `nu` pointing out of
//! phase 2, so phase 2 occupies `{x : nu . x <= offset}` inside each mixed cell.

pub mod advect;
pub mod curvature;
pub mod init;
pub mod plic;

pub use advect::{advect, face_velocities, face_velocities_from_fn, face_velocities_from_stream, AdvectReport};
pub use curvature::curvature;
pub use init::{circle_fraction, halfplane_fraction_field};
pub use plic::{reconstruct_plic, reconstruct_with_normals, PlicSegment};

use crate::mesh::{CartesianMesh, Point};

/// Fractions within this distance of 0 or 1 are treated as pure.
pub const MIXED_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct VofField {
    pub chi: Vec<f64>,
    prev_normals: Vec<Option<Point>>,
}

impl VofField {
    pub fn new(chi: Vec<f64>) -> Self {
        let n = chi.len();
        Self { chi, prev_normals: vec![None; n] }
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    pub fn is_mixed(&self, cell: usize) -> bool {
        let c = self.chi[cell];
        c > MIXED_TOL && c < 1.0 - MIXED_TOL
    }

    /// Phase-2 volume `sum chi |E|`.
    pub fn mass(&self, mesh: &CartesianMesh) -> f64 {
        self.chi.iter().sum::<f64>() * mesh.cell_area()
    }

    /// Normal used when the fraction gradient of a mixed cell degenerates.
    pub fn fallback_normal(&self, cell: usize) -> Point {
        self.prev_normals.get(cell).copied().flatten().unwrap_or([0.0, 1.0])
    }

    pub fn remember_normals(&mut self, segments: &[PlicSegment]) {
        for s in segments {
            self.prev_normals[s.cell] = Some(s.normal);
        }
    }

    pub(crate) fn with_chi(&self, chi: Vec<f64>) -> Self {
        Self { chi, prev_normals: self.prev_normals.clone() }
    }
}

/// Centroid of the phase-2 region from the PLIC sub-polygons.
pub fn phase_centroid(mesh: &CartesianMesh, field: &VofField) -> Option<Point> {
    let mut polys: Vec<Option<crate::geom::Polygon>> = vec![None; mesh.num_cells()];
    for s in reconstruct_plic(mesh, field) {
        let (lo, hi) = mesh.cell_bounds(s.cell);
        polys[s.cell] = crate::geom::clip_cell(lo, hi, &s).map(|(_, p2)| p2);
    }
    let (mut a, mut mx, mut my) = (0.0, 0.0, 0.0);
    for (c, p) in polys.iter().enumerate() {
        let (area, cen) = match p {
            Some(p) => match p.centroid() {
                Some(cen) => (p.area(), cen),
                None => continue,
            },
            None if field.chi[c] > 0.5 => (field.chi[c] * mesh.cell_area(), mesh.cell_center(c)),
            None => continue,
        };
        a += area;
        mx += area * cen[0];
        my += area * cen[1];
    }
    (a > 0.0).then(|| [mx / a, my / a])
}
