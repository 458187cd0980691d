//! Gauss rules on the interval, the reference square and the reference triangle.

/// Gauss-Legendre nodes and weights on [-1, 1]; exact for degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_and_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Number of Gauss points needed to integrate a 1D polynomial of the given degree exactly.
pub fn points_for_degree(degree: usize) -> usize {
    degree / 2 + 1
}

/// Quadrature rule with points in reference coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    /// Highest total polynomial degree integrated exactly.
    pub degree: usize,
}

impl Quadrature {
    /// Tensor Gauss rule on [-1, 1]^2 (weights sum to 4).
    pub fn square(degree: usize) -> Self {
        let (x, w) = gauss_legendre(points_for_degree(degree));
        let mut points = Vec::with_capacity(x.len() * x.len());
        let mut weights = Vec::with_capacity(x.len() * x.len());
        for (yj, wj) in x.iter().zip(&w) {
            for (xi, wi) in x.iter().zip(&w) {
                points.push([*xi, *yj]);
                weights.push(wi * wj);
            }
        }
        Self { points, weights, degree }
    }

    /// Collapsed (Duffy) Gauss rule on the triangle (0,0), (1,0), (0,1) (weights sum to 1/2).
    pub fn triangle(degree: usize) -> Self {
        // the collapse adds one degree in the radial direction
        let (x, w) = gauss_legendre(points_for_degree(degree + 1));
        let mut points = Vec::with_capacity(x.len() * x.len());
        let mut weights = Vec::with_capacity(x.len() * x.len());
        for (a, wa) in x.iter().zip(&w) {
            let s = 0.5 * (a + 1.0);
            for (b, wb) in x.iter().zip(&w) {
                let t = 0.5 * (b + 1.0);
                points.push([s * (1.0 - t), s * t]);
                weights.push(0.25 * wa * wb * s);
            }
        }
        Self { points, weights, degree }
    }

    /// Gauss rule on [-1, 1] stored in the first coordinate.
    pub fn line(degree: usize) -> Self {
        let (x, w) = gauss_legendre(points_for_degree(degree));
        Self { points: x.iter().map(|&t| [t, 0.0]).collect(), weights: w, degree }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}
