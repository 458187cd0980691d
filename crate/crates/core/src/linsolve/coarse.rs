//! Two-level preconditioning with a small coarse space.
//!
//! `z = M^{-1} r`, then `z += Z E^{-1} Z^T (r - A z)` with `E = Z^T A Z`.
//! With `Z` spanning the slow modes of `A` (for a variable-coefficient
//! Laplacian: constants on regions of high coefficient), the Krylov method
//! no longer has to resolve them one by one.

use nalgebra::{DMatrix, DVector, LU};

use super::sparse::SparseMatrix;
use super::Preconditioner;

/// Sparse coarse vector as `(index, value)` pairs.
pub type CoarseVector = Vec<(usize, f64)>;

pub struct CoarseCorrection<'a, P: ?Sized> {
    a: &'a SparseMatrix,
    inner: &'a P,
    basis: Vec<CoarseVector>,
    lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl<'a, P: Preconditioner + ?Sized> CoarseCorrection<'a, P> {
    /// `None` if the basis is empty or `Z^T A Z` is singular.
    pub fn new(a: &'a SparseMatrix, inner: &'a P, basis: Vec<CoarseVector>) -> Option<Self> {
        let m = basis.len();
        if m == 0 {
            return None;
        }
        let n = a.nrows();
        let mut e = DMatrix::zeros(m, m);
        let mut dense = vec![0.0; n];
        let mut az = vec![0.0; n];
        for (j, zj) in basis.iter().enumerate() {
            dense.iter_mut().for_each(|v| *v = 0.0);
            for &(i, v) in zj {
                dense[i] = v;
            }
            a.apply(&dense, &mut az);
            for (i, zi) in basis.iter().enumerate() {
                e[(i, j)] = zi.iter().map(|&(k, v)| v * az[k]).sum::<f64>();
            }
        }
        let lu = e.lu();
        if !lu.is_invertible() {
            return None;
        }
        Some(Self { a, inner, basis, lu })
    }

    pub fn coarse_dim(&self) -> usize {
        self.basis.len()
    }
}

impl<P: Preconditioner + ?Sized> Preconditioner for CoarseCorrection<'_, P> {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        self.inner.apply(r, z);
        let mut s = vec![0.0; r.len()];
        self.a.apply(z, &mut s);
        for (si, ri) in s.iter_mut().zip(r) {
            *si = ri - *si;
        }
        let c = DVector::from_iterator(self.basis.len(), self.basis.iter().map(|zi| zi.iter().map(|&(k, v)| v * s[k]).sum::<f64>()));
        let Some(e) = self.lu.solve(&c) else { return };
        for (zi, ei) in self.basis.iter().zip(e.iter()) {
            for &(k, v) in zi {
                z[k] += ei * v;
            }
        }
    }
}
