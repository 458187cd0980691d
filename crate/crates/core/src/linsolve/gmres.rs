//! Restarted GMRES with right preconditioning.
//!
//! Right preconditioning keeps the Arnoldi residual equal to the residual of
//! the original system, so the stopping test is on `||b - A x|| / ||b||`.

use super::sparse::LinearOperator;
use super::{Preconditioner, SolverReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    pub rtol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, restart: 60, max_iter: 2000 }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn residual<A: LinearOperator + ?Sized>(a: &A, b: &[f64], x: &[f64], r: &mut [f64]) -> f64 {
    a.apply(x, r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    norm(r)
}

/// Solves `A x = b` starting from the contents of `x`.
pub fn gmres<A, P>(a: &A, b: &[f64], x: &mut [f64], precond: &P, opts: &GmresOptions) -> SolverReport
where
    A: LinearOperator + ?Sized,
    P: Preconditioner + ?Sized,
{
    let n = a.dim();
    assert_eq!(b.len(), n);
    assert_eq!(x.len(), n);
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return SolverReport { iterations: 0, residual: 0.0, converged: true };
    }
    let target = opts.rtol * bnorm;
    let m = opts.restart.max(1);
    let mut r = vec![0.0; n];
    let mut rnorm = residual(a, b, x, &mut r);
    let mut iterations = 0;

    let mut v: Vec<Vec<f64>> = (0..=m).map(|_| vec![0.0; n]).collect();
    let mut h = vec![vec![0.0; m]; m + 1];
    let mut cs = vec![0.0; m];
    let mut sn = vec![0.0; m];
    let mut g = vec![0.0; m + 1];
    let mut z = vec![0.0; n];
    let mut w = vec![0.0; n];

    while rnorm > target && iterations < opts.max_iter {
        for (vi, ri) in v[0].iter_mut().zip(&r) {
            *vi = ri / rnorm;
        }
        g.iter_mut().for_each(|e| *e = 0.0);
        g[0] = rnorm;
        let mut k = 0;
        while k < m && iterations < opts.max_iter {
            precond.apply(&v[k], &mut z);
            a.apply(&z, &mut w);
            for i in 0..=k {
                let hik = dot(&w, &v[i]);
                h[i][k] = hik;
                for (wj, vj) in w.iter_mut().zip(&v[i]) {
                    *wj -= hik * vj;
                }
            }
            let hk1 = norm(&w);
            h[k + 1][k] = hk1;
            if hk1 > 0.0 {
                for (vj, wj) in v[k + 1].iter_mut().zip(&w) {
                    *vj = wj / hk1;
                }
            }
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = h[k][k].hypot(h[k + 1][k]);
            if denom == 0.0 {
                cs[k] = 1.0;
                sn[k] = 0.0;
            } else {
                cs[k] = h[k][k] / denom;
                sn[k] = h[k + 1][k] / denom;
            }
            h[k][k] = cs[k] * h[k][k] + sn[k] * h[k + 1][k];
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            iterations += 1;
            k += 1;
            if g[k].abs() <= target || hk1 == 0.0 {
                break;
            }
        }
        // back substitution for the k x k triangular system
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in (i + 1)..k {
                s -= h[i][j] * y[j];
            }
            y[i] = if h[i][i] != 0.0 { s / h[i][i] } else { 0.0 };
        }
        w.iter_mut().for_each(|e| *e = 0.0);
        for (yi, vi) in y.iter().zip(&v) {
            for (wj, vj) in w.iter_mut().zip(vi) {
                *wj += yi * vj;
            }
        }
        precond.apply(&w, &mut z);
        for (xi, zi) in x.iter_mut().zip(&z) {
            *xi += zi;
        }
        rnorm = residual(a, b, x, &mut r);
        if k == 0 || !rnorm.is_finite() {
            break;
        }
    }
    SolverReport { iterations, residual: rnorm / bnorm, converged: rnorm <= target }
}
