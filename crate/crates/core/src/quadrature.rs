//! Quadrature on the reference triangle, on intervals and on disks.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, then Newton on P_n
        let mut x = ((i as f64 + 0.75) / (n as f64 + 0.5) * PI).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A rule on the reference triangle: barycentric points, weights summing to 1.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    /// A rule exact for polynomials of total degree `degree`.
    ///
    /// Degrees up to 2 and degree 6 use symmetric rules; everything else is a
    /// collapsed Gauss–Legendre product rule.
    pub fn with_degree(degree: usize) -> Self {
        match degree {
            0 | 1 => Self {
                points: vec![[1.0 / 3.0; 3]],
                weights: vec![1.0],
                degree: 1,
            },
            2 => {
                let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
                Self {
                    points: vec![[a, b, b], [b, a, b], [b, b, a]],
                    weights: vec![1.0 / 3.0; 3],
                    degree: 2,
                }
            }
            6 => Self::symmetric_degree6(),
            d => Self::collapsed(d),
        }
    }

    /// Twelve-point symmetric rule of degree 6.
    pub fn symmetric_degree6() -> Self {
        let orbits3 = [
            (0.116786275726379, 0.501426509658179, 0.249286745170910),
            (0.050844906370207, 0.873821971016996, 0.063089014491502),
        ];
        let orbit6 = (
            0.082851075618374,
            [0.053145049844817, 0.310352451033784, 0.636502499121399],
        );
        let mut points = Vec::with_capacity(12);
        let mut weights = Vec::with_capacity(12);
        for (w, a, b) in orbits3 {
            for p in [[a, b, b], [b, a, b], [b, b, a]] {
                points.push(p);
                weights.push(w);
            }
        }
        let (w, [a, b, c]) = orbit6;
        for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            points.push(p);
            weights.push(w);
        }
        // tabulated weights carry 15 digits; rescale to an exact unit sum
        let s: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= s);
        Self {
            points,
            weights,
            degree: 6,
        }
    }

    /// Duffy-collapsed tensor Gauss rule exact to the given degree.
    pub fn collapsed(degree: usize) -> Self {
        let n = (degree + 2).div_ceil(2);
        let (x, w) = gauss_legendre(n);
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for (u, wu) in x.iter().zip(&w) {
            for (v, wv) in x.iter().zip(&w) {
                let xi = *u;
                let eta = v * (1.0 - u);
                points.push([1.0 - xi - eta, xi, eta]);
                // reference area is 1/2; normalise weights to sum to 1
                weights.push(2.0 * wu * wv * (1.0 - u));
            }
        }
        Self {
            points,
            weights,
            degree,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Polar rule on the unit disk: uniform angles times Gauss–Legendre radii.
#[derive(Debug, Clone)]
pub struct PolarRule {
    pub n_theta: usize,
    pub n_rho: usize,
    /// Offsets in the unit disk.
    pub offsets: Vec<[f64; 2]>,
    /// Weights summing to π (the disk area).
    pub weights: Vec<f64>,
}

impl PolarRule {
    pub fn new(n_theta: usize, n_rho: usize) -> Self {
        let (rho, wr) = gauss_legendre(n_rho);
        let mut offsets = Vec::with_capacity(n_theta * n_rho);
        let mut weights = Vec::with_capacity(n_theta * n_rho);
        let dtheta = 2.0 * PI / n_theta as f64;
        for k in 0..n_theta {
            // half-step offset keeps nodes off the coordinate axes
            let t = (k as f64 + 0.5) * dtheta;
            let (s, c) = t.sin_cos();
            for (r, w) in rho.iter().zip(&wr) {
                offsets.push([r * c, r * s]);
                weights.push(w * r * dtheta);
            }
        }
        Self {
            n_theta,
            n_rho,
            offsets,
            weights,
        }
    }
}
