use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::diagnostics::{DiagnosticsRow, CSV_HEADER};
use crate::error::Result;
use crate::solver::FlowState;
use crate::vof::PlicSegment;

/// Legacy ASCII VTK file with cell-averaged velocity, pressure and volume fraction.
pub fn write_vtk(path: &Path, state: &FlowState) -> Result<()> {
    let mesh = state.u.space.mesh();
    let mut w = BufWriter::new(File::create(path)?);
    let n = mesh.num_cells();
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "two-phase flow t = {:.14e}", state.t)?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {} {} 1", mesh.nx + 1, mesh.ny + 1)?;
    writeln!(w, "ORIGIN {:.14e} {:.14e} 0", mesh.origin[0], mesh.origin[1])?;
    writeln!(w, "SPACING {:.14e} {:.14e} 1", mesh.hx, mesh.hy)?;
    writeln!(w, "CELL_DATA {n}")?;
    writeln!(w, "VECTORS u double")?;
    for c in 0..n {
        writeln!(w, "{:.14e} {:.14e} 0", state.u.cell_mean(c, 0), state.u.cell_mean(c, 1))?;
    }
    writeln!(w, "SCALARS p double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for c in 0..n {
        writeln!(w, "{:.14e}", state.p.cell_mean(c, 0))?;
    }
    writeln!(w, "SCALARS chi double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for c in 0..n {
        writeln!(w, "{:.14e}", state.vof.chi[c])?;
    }
    w.flush()?;
    Ok(())
}

/// PLIC segments, one `x0 y0 x1 y1` line each.
pub fn write_segments(path: &Path, segments: &[PlicSegment]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for s in segments {
        let [a, b] = s.endpoints;
        writeln!(w, "{:.14e} {:.14e} {:.14e} {:.14e}", a[0], a[1], b[0], b[1])?;
    }
    w.flush()?;
    Ok(())
}

/// Diagnostics CSV; every row is flushed so a failed run leaves a complete file.
pub struct DiagnosticsWriter {
    out: BufWriter<File>,
}

impl DiagnosticsWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{CSV_HEADER}")?;
        Ok(Self { out })
    }

    pub fn write(&mut self, row: &DiagnosticsRow) -> Result<()> {
        writeln!(self.out, "{}", row.csv_line())?;
        self.out.flush()?;
        Ok(())
    }
}
