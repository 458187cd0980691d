//! Orthonormal total-degree polynomial bases on the reference square.
//!
//! Products of normalized Legendre polynomials `L_a(xi) L_b(eta)` with
//! `a + b <= k` are mutually orthogonal on [-1, 1]^2 and span P_k, so no
//! Gram-Schmidt step is required. Functions are ordered by total degree, which
//! makes the first `dim(k)` functions of the degree-`k+1` basis the degree-`k` basis.

/// Number of total-degree-`k` monomials in two variables.
pub fn dim(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

/// Normalized Legendre polynomials `sqrt((2n+1)/2) P_n` and their derivatives up to degree `k`.
pub fn legendre(k: usize, x: f64, values: &mut [f64], derivs: &mut [f64]) {
    let mut p = vec![0.0; k + 1];
    let mut d = vec![0.0; k + 1];
    p[0] = 1.0;
    if k >= 1 {
        p[1] = x;
        d[1] = 1.0;
    }
    for n in 1..k {
        let nf = n as f64;
        p[n + 1] = ((2.0 * nf + 1.0) * x * p[n] - nf * p[n - 1]) / (nf + 1.0);
        d[n + 1] = d[n - 1] + (2.0 * nf + 1.0) * p[n];
    }
    for n in 0..=k {
        let s = ((2 * n + 1) as f64 / 2.0).sqrt();
        values[n] = s * p[n];
        derivs[n] = s * d[n];
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarBasis {
    degree: usize,
    exponents: Vec<(usize, usize)>,
}

impl ScalarBasis {
    pub fn new(degree: usize) -> Self {
        let mut exponents = Vec::with_capacity(dim(degree));
        for n in 0..=degree {
            for a in (0..=n).rev() {
                exponents.push((a, n - a));
            }
        }
        Self { degree, exponents }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[(usize, usize)] {
        &self.exponents
    }

    /// Values on the reference square (orthonormal w.r.t. the reference measure).
    pub fn eval(&self, xi: [f64; 2], out: &mut [f64]) {
        let k = self.degree;
        let (mut lx, mut dx, mut ly, mut dy) = (vec![0.0; k + 1], vec![0.0; k + 1], vec![0.0; k + 1], vec![0.0; k + 1]);
        legendre(k, xi[0], &mut lx, &mut dx);
        legendre(k, xi[1], &mut ly, &mut dy);
        for (o, &(a, b)) in out.iter_mut().zip(&self.exponents) {
            *o = lx[a] * ly[b];
        }
    }

    /// Values and reference gradients.
    pub fn eval_with_grad(&self, xi: [f64; 2], values: &mut [f64], grads: &mut [[f64; 2]]) {
        let k = self.degree;
        let (mut lx, mut dx, mut ly, mut dy) = (vec![0.0; k + 1], vec![0.0; k + 1], vec![0.0; k + 1], vec![0.0; k + 1]);
        legendre(k, xi[0], &mut lx, &mut dx);
        legendre(k, xi[1], &mut ly, &mut dy);
        for (n, &(a, b)) in self.exponents.iter().enumerate() {
            values[n] = lx[a] * ly[b];
            grads[n] = [dx[a] * ly[b], lx[a] * dy[b]];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::quadrature::Quadrature;

    #[test]
    fn dimensions() {
        assert_eq!(dim(0), 1);
        assert_eq!(dim(1), 3);
        assert_eq!(dim(2), 6);
        assert_eq!(ScalarBasis::new(3).len(), 10);
    }

    #[test]
    fn reference_orthonormality() {
        for k in 0..=4 {
            let b = ScalarBasis::new(k);
            let q = Quadrature::square(2 * k);
            let m = b.len();
            let mut gram = vec![0.0; m * m];
            let mut v = vec![0.0; m];
            for (p, w) in q.points.iter().zip(&q.weights) {
                b.eval(*p, &mut v);
                for i in 0..m {
                    for j in 0..m {
                        gram[i * m + j] += w * v[i] * v[j];
                    }
                }
            }
            for i in 0..m {
                for j in 0..m {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((gram[i * m + j] - e).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn hierarchical_ordering() {
        let lo = ScalarBasis::new(2);
        let hi = ScalarBasis::new(3);
        assert_eq!(lo.exponents(), &hi.exponents()[..lo.len()]);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let b = ScalarBasis::new(3);
        let m = b.len();
        let xi = [0.3, -0.45];
        let mut v = vec![0.0; m];
        let mut g = vec![[0.0; 2]; m];
        b.eval_with_grad(xi, &mut v, &mut g);
        let eps = 1e-6;
        let (mut vp, mut vm) = (vec![0.0; m], vec![0.0; m]);
        for d in 0..2 {
            let mut xp = xi;
            let mut xm = xi;
            xp[d] += eps;
            xm[d] -= eps;
            b.eval(xp, &mut vp);
            b.eval(xm, &mut vm);
            for n in 0..m {
                let fd = (vp[n] - vm[n]) / (2.0 * eps);
                assert!((fd - g[n][d]).abs() < 1e-8);
            }
        }
    }
}
