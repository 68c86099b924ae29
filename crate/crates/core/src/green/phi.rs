use crate::error::{Result, RitzError};
use crate::mesh::{mesh_at_level, ConvexPolygon, Point};
use crate::quadrature::{gauss_legendre, QuadratureRule};

/// `φ_{ε,z}(x) = c₁ ε^γ (|x − z|² + K²ε²)^{−(2+γ)/2}`, with `c₁` chosen so that
/// `∫_Ω φ_{ε,z} = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiWeight {
    pub epsilon: f64,
    pub z: Point,
    pub k: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub c1: f64,
}

/// Gauss points per angular sector in the mass integral.
const ANGULAR_POINTS: usize = 48;

impl PhiWeight {
    pub fn new(domain: &ConvexPolygon, epsilon: f64, z: Point, k: f64, gamma: f64, alpha: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(RitzError::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(k > 2.0) {
            return Err(RitzError::InvalidArgument(format!("K must exceed 2, got {k}")));
        }
        if !(gamma > 0.0 && gamma < alpha) {
            return Err(RitzError::InvalidArgument(format!(
                "gamma must lie in (0, alpha) = (0, {alpha}), got {gamma}"
            )));
        }
        if domain.margin(z) <= 0.0 {
            return Err(RitzError::PointOutside(z[0], z[1]));
        }
        let mut w = Self {
            epsilon,
            z,
            k,
            gamma,
            alpha,
            c1: 1.0,
        };
        w.c1 = 1.0 / w.mass(domain);
        Ok(w)
    }

    /// `c₁` of the unscaled weight `c₁(|x|² + K²)^{−(2+γ)/2}` normalized to
    /// unit mass over Ω (no rescaling or translation). Unlike the per-weight
    /// normalization this does not depend on ε or z.
    pub fn reference_c1(domain: &ConvexPolygon, k: f64, gamma: f64) -> Result<f64> {
        let mesh = mesh_at_level(domain, 3)?;
        let rule = QuadratureRule::with_degree(12);
        let mut total = 0.0;
        for t in 0..mesh.n_triangles() {
            let area = mesh.geometry(t).area;
            for (p, w) in rule.points.iter().zip(&rule.weights) {
                let x = mesh.point_at(t, *p);
                total += w * area * (x[0] * x[0] + x[1] * x[1] + k * k).powf(-(2.0 + gamma) / 2.0);
            }
        }
        Ok(1.0 / total)
    }

    pub fn eval(&self, x: Point) -> f64 {
        let r2 = (x[0] - self.z[0]).powi(2) + (x[1] - self.z[1]).powi(2);
        self.c1 * self.epsilon.powf(self.gamma) * (r2 + (self.k * self.epsilon).powi(2)).powf(-(2.0 + self.gamma) / 2.0)
    }

    /// `∫_Ω φ_{ε,z}` in polar coordinates about z. The radial integral is in
    /// closed form; the angular one uses Gauss–Legendre on each sector between
    /// consecutive vertex directions, where the exit distance is smooth.
    pub fn mass(&self, domain: &ConvexPolygon) -> f64 {
        let (eps, g) = (self.epsilon, self.gamma);
        let a2 = (self.k * eps).powi(2);
        let radial = |r: f64| eps.powf(g) / g * (a2.powf(-g / 2.0) - (r * r + a2).powf(-g / 2.0));

        let mut angles: Vec<f64> = domain
            .vertices()
            .iter()
            .map(|v| (v[1] - self.z[1]).atan2(v[0] - self.z[0]))
            .collect();
        angles.sort_by(f64::total_cmp);
        let (x, w) = gauss_legendre(ANGULAR_POINTS);
        let mut total = 0.0;
        for i in 0..angles.len() {
            let a = angles[i];
            let b = if i + 1 < angles.len() {
                angles[i + 1]
            } else {
                angles[0] + 2.0 * std::f64::consts::PI
            };
            for (t, wt) in x.iter().zip(&w) {
                let theta = a + (b - a) * t;
                let exit = domain.ray_exit(self.z, [theta.cos(), theta.sin()]);
                total += wt * (b - a) * radial(exit);
            }
        }
        self.c1 * total
    }
}
