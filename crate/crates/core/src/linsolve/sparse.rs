use crate::error::{Error, Result};

/// Compressed sparse row matrix with sorted, unique column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    /// Explicit zeros are kept so the pattern can be reused.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= nrows || *c >= ncols) {
            return Err(Error::DimensionMismatch(format!("entry ({r}, {c}) outside {nrows}x{ncols}")));
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self { nrows, ncols, row_ptr, col_idx, values })
    }

    /// Builds a matrix from per-row sorted column lists with zero values.
    pub fn from_pattern(ncols: usize, rows: &[Vec<usize>]) -> Self {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        for r in rows {
            debug_assert!(r.windows(2).all(|w| w[0] < w[1]));
            col_idx.extend_from_slice(r);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        Self { nrows: rows.len(), ncols, row_ptr, col_idx, values: vec![0.0; nnz] }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn from_dense(rows: usize, cols: usize, data: &[f64]) -> Self {
        let mut t = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                let v = data[i * cols + j];
                if v != 0.0 {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(rows, cols, t).expect("indices are in range")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    /// Storage position of entry `(i, j)` if it is in the pattern.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let start = self.row_ptr[i];
        self.col_idx[start..self.row_ptr[i + 1]].binary_search(&j).ok().map(|p| start + p)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.position(i, j).map_or(0.0, |p| self.values[p])
    }

    /// `y = A x`
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            *yi = s;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.apply(x, &mut y);
        y
    }

    /// `y += A^T x`
    pub fn apply_transpose_add(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.nrows);
        assert_eq!(y.len(), self.ncols);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                y[self.col_idx[k]] += self.values[k] * xi;
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                t.push((self.col_idx[k], i, self.values[k]));
            }
        }
        Self::from_triplets(self.ncols, self.nrows, t).expect("transposed indices are in range")
    }

    pub fn scale(&mut self, s: f64) {
        self.values.iter_mut().for_each(|v| *v *= s);
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.nrows * self.ncols];
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                d[i * self.ncols + self.col_idx[k]] += self.values[k];
            }
        }
        d
    }

    /// Largest `|A_ij - A_ji|` over the pattern.
    pub fn max_asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                m = m.max((self.values[k] - self.get(j, i)).abs());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Replaces row and column `i` by the identity row/column.
    pub fn pin_dof(&mut self, i: usize) {
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k];
                if r == i || c == i {
                    self.values[k] = if r == c { 1.0 } else { 0.0 };
                }
            }
        }
    }

    /// Dense copy of a contiguous block of rows restricted to the columns it touches.
    pub fn rows_dense(&self, rows: std::ops::Range<usize>) -> (Vec<usize>, nalgebra::DMatrix<f64>) {
        let mut cols: Vec<usize> = self.col_idx[self.row_ptr[rows.start]..self.row_ptr[rows.end]].to_vec();
        cols.sort_unstable();
        cols.dedup();
        let mut m = nalgebra::DMatrix::zeros(rows.len(), cols.len());
        for (li, i) in rows.enumerate() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let lj = cols.binary_search(&self.col_idx[k]).unwrap();
                m[(li, lj)] += self.values[k];
            }
        }
        (cols, m)
    }

    /// Checks the structural invariants: monotone offsets, sorted unique columns.
    pub fn is_well_formed(&self) -> bool {
        self.row_ptr.len() == self.nrows + 1
            && self.row_ptr.windows(2).all(|w| w[0] <= w[1])
            && (0..self.nrows).all(|i| {
                let c = &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]];
                c.windows(2).all(|w| w[0] < w[1]) && c.iter().all(|&j| j < self.ncols)
            })
    }
}

/// A square linear map.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        assert_eq!(self.nrows, self.ncols);
        self.nrows
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        SparseMatrix::apply(self, x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matvec_matches_dense(
            rows in 1usize..8,
            cols in 1usize..8,
            seed in proptest::collection::vec(-2.0f64..2.0, 64),
            mask in proptest::collection::vec(proptest::bool::ANY, 64),
            x in proptest::collection::vec(-3.0f64..3.0, 8),
        ) {
            let dense: Vec<f64> = (0..rows * cols).map(|k| if mask[k] { seed[k] } else { 0.0 }).collect();
            let a = SparseMatrix::from_dense(rows, cols, &dense);
            prop_assert!(a.is_well_formed());
            let y = a.mul_vec(&x[..cols]);
            for i in 0..rows {
                let r: f64 = (0..cols).map(|j| dense[i * cols + j] * x[j]).sum();
                prop_assert!((y[i] - r).abs() < 1e-14);
            }
            let mut yt = vec![0.0; cols];
            a.apply_transpose_add(&y, &mut yt);
            let at = a.transpose();
            let yt2 = at.mul_vec(&y);
            for j in 0..cols {
                prop_assert!((yt[j] - yt2[j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn triplets_merge_duplicates() {
        let a = SparseMatrix::from_triplets(2, 2, vec![(1, 0, 1.0), (0, 1, 2.0), (1, 0, 3.0), (0, 0, 0.0)]).unwrap();
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.get(1, 0), 4.0);
        assert_eq!(a.get(1, 1), 0.0);
        assert!(a.position(0, 0).is_some());
        assert!(SparseMatrix::from_triplets(2, 2, vec![(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn pinning_keeps_symmetry() {
        let a = SparseMatrix::from_dense(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let mut p = a.clone();
        p.pin_dof(1);
        assert_eq!(p.get(1, 1), 1.0);
        assert_eq!(p.get(0, 1), 0.0);
        assert_eq!(p.get(1, 2), 0.0);
        assert_eq!(p.max_asymmetry(), 0.0);
    }
}
