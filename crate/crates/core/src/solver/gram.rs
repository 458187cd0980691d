//! Assembly of weighted Gram matrices `sum_E B_E^T W_E B_E`.
//!
//! `B` is a sparse operator whose rows are grouped cell by cell (a lifted
//! derivative); `W_E` is a small dense weight acting on the rows of cell `E`.
//! The unit-weight sum is assembled once; a step only adds `B_E^T dW_E B_E`
//! for the cells whose weight differs from the reference phase.

use nalgebra::DMatrix;

use crate::linsolve::SparseMatrix;

#[derive(Debug, Clone)]
pub struct GramAssembler {
    rows_per_cell: usize,
    /// Per cell: touched columns and the dense row block of `B`.
    blocks: Vec<(Vec<usize>, DMatrix<f64>)>,
    /// `sum_E B_E^T diag(row_weights) B_E`
    base: SparseMatrix,
}

impl GramAssembler {
    /// `row_weights` is the reference weight of each local row (length `rows_per_cell`).
    pub fn new(b: &SparseMatrix, rows_per_cell: usize, row_weights: &[f64]) -> Self {
        assert_eq!(b.nrows() % rows_per_cell, 0);
        assert_eq!(row_weights.len(), rows_per_cell);
        let ncells = b.nrows() / rows_per_cell;
        let blocks: Vec<_> = (0..ncells).map(|c| b.rows_dense(c * rows_per_cell..(c + 1) * rows_per_cell)).collect();
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); b.ncols()];
        for (cols, _) in &blocks {
            for &r in cols {
                rows[r].extend_from_slice(cols);
            }
        }
        for r in rows.iter_mut() {
            r.sort_unstable();
            r.dedup();
        }
        let mut base = SparseMatrix::from_pattern(b.ncols(), &rows);
        let w = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(row_weights));
        let mut g = Self { rows_per_cell, blocks, base: base.clone() };
        for c in 0..ncells {
            g.add_cell(&mut base, c, &w, 1.0);
        }
        g.base = base;
        g
    }

    pub fn rows_per_cell(&self) -> usize {
        self.rows_per_cell
    }

    pub fn base(&self) -> &SparseMatrix {
        &self.base
    }

    pub fn block(&self, cell: usize) -> &(Vec<usize>, DMatrix<f64>) {
        &self.blocks[cell]
    }

    /// `target += scale * B_E^T w B_E`; `target` must carry the Gram pattern.
    pub fn add_cell(&self, target: &mut SparseMatrix, cell: usize, w: &DMatrix<f64>, scale: f64) {
        let (cols, be) = &self.blocks[cell];
        let local = be.transpose() * (w * be);
        for (li, &gi) in cols.iter().enumerate() {
            let start = target.row_ptr()[gi];
            let end = target.row_ptr()[gi + 1];
            let row_cols = target.col_idx()[start..end].to_vec();
            let vals = target.values_mut();
            let mut pos = 0;
            for (lj, &gj) in cols.iter().enumerate() {
                // columns are sorted in both lists, so walk forward
                while row_cols[pos] != gj {
                    pos += 1;
                }
                vals[start + pos] += scale * local[(li, lj)];
            }
        }
    }
}
