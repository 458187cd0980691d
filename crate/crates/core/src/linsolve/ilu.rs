//! Zero fill-in incomplete LU factorization.
//!
//! `L` (unit diagonal) is stored below the diagonal and `U` on and above it,
//! both in the sparsity pattern of the input matrix.

use super::sparse::SparseMatrix;
use super::Preconditioner;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Ilu0 {
    lu: SparseMatrix,
    diag: Vec<usize>,
}

impl Ilu0 {
    pub fn new(a: &SparseMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch(format!("ILU(0) needs a square matrix, got {}x{}", a.nrows(), a.ncols())));
        }
        let n = a.nrows();
        let mut diag = Vec::with_capacity(n);
        for i in 0..n {
            diag.push(a.position(i, i).ok_or(Error::ZeroPivot { row: i })?);
        }
        let mut f = Self { lu: a.clone(), diag };
        f.factor()?;
        Ok(f)
    }

    /// Refactors in place for a matrix with the same sparsity pattern.
    pub fn refactor(&mut self, a: &SparseMatrix) -> Result<()> {
        if a.row_ptr() != self.lu.row_ptr() || a.col_idx() != self.lu.col_idx() {
            *self = Self::new(a)?;
            return Ok(());
        }
        self.lu.values_mut().copy_from_slice(a.values());
        self.factor()
    }

    fn factor(&mut self) -> Result<()> {
        let n = self.lu.nrows();
        let row_ptr = self.lu.row_ptr().to_vec();
        let col_idx = self.lu.col_idx().to_vec();
        let vals = self.lu.values_mut();
        let mut marker = vec![usize::MAX; n];
        for i in 0..n {
            let (start, end) = (row_ptr[i], row_ptr[i + 1]);
            for k in start..end {
                marker[col_idx[k]] = k;
            }
            for kk in start..self.diag[i] {
                let k = col_idx[kk];
                let pivot = vals[self.diag[k]];
                let l = vals[kk] / pivot;
                vals[kk] = l;
                if l == 0.0 {
                    continue;
                }
                for jj in (self.diag[k] + 1)..row_ptr[k + 1] {
                    let pos = marker[col_idx[jj]];
                    if pos != usize::MAX {
                        vals[pos] -= l * vals[jj];
                    }
                }
            }
            for k in start..end {
                marker[col_idx[k]] = usize::MAX;
            }
            let d = vals[self.diag[i]];
            if d == 0.0 || !d.is_finite() {
                return Err(Error::ZeroPivot { row: i });
            }
        }
        Ok(())
    }
}

impl Preconditioner for Ilu0 {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        let n = self.lu.nrows();
        let row_ptr = self.lu.row_ptr();
        let col_idx = self.lu.col_idx();
        let vals = self.lu.values();
        for i in 0..n {
            let mut s = r[i];
            for k in row_ptr[i]..self.diag[i] {
                s -= vals[k] * z[col_idx[k]];
            }
            z[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in (self.diag[i] + 1)..row_ptr[i + 1] {
                s -= vals[k] * z[col_idx[k]];
            }
            z[i] = s / vals[self.diag[i]];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_is_inverted_exactly() {
        let a = SparseMatrix::from_dense(3, 3, &[2.0, 0.0, 0.0, 0.0, -4.0, 0.0, 0.0, 0.0, 0.5]);
        let ilu = Ilu0::new(&a).unwrap();
        let mut z = vec![0.0; 3];
        ilu.apply(&[1.0, 1.0, 1.0], &mut z);
        assert_eq!(z, vec![0.5, -0.25, 2.0]);
    }

    #[test]
    fn zero_pivot_is_reported() {
        let a = SparseMatrix::from_dense(2, 2, &[0.0, 1.0, 1.0, 1.0]);
        // (0,0) is not even in the pattern
        assert!(matches!(Ilu0::new(&a), Err(Error::ZeroPivot { row: 0 })));
        let b = SparseMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]).unwrap();
        assert!(matches!(Ilu0::new(&b), Err(Error::ZeroPivot { row: 1 })));
    }

    #[test]
    fn full_pattern_gives_exact_lu() {
        let d = [4.0, 1.0, 2.0, 1.0, 5.0, 1.0, 2.0, 1.0, 6.0];
        let a = SparseMatrix::from_dense(3, 3, &d);
        let ilu = Ilu0::new(&a).unwrap();
        let b = [1.0, -2.0, 3.0];
        let mut x = vec![0.0; 3];
        ilu.apply(&b, &mut x);
        let ax = a.mul_vec(&x);
        for i in 0..3 {
            assert!((ax[i] - b[i]).abs() < 1e-14);
        }
    }
}
