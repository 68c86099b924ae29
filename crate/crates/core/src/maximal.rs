//! Centered Hardy–Littlewood maximal function of a zero-extended field.
//!
//! Ball averages always divide by the full disk area πr², including balls
//! that leave the domain. The supremum over radii is taken on a geometric
//! grid and is therefore a lower bound of the true supremum.

use crate::field::{norm2, PiecewiseField};
use crate::mesh::{Point, Triangulation};
use crate::quadrature::{gauss_legendre, PolarRule};

use std::f64::consts::PI;

/// Geometric radius grid `r_min, r_min·ratio, …` up to at least `r_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub ratio: f64,
}

impl RadiusGrid {
    /// `h/8` to `2·diam(Ω)` with ratio 1.05.
    pub fn for_mesh(mesh: &Triangulation) -> Self {
        Self {
            r_min: mesh.mesh_size() / 8.0,
            r_max: 2.0 * mesh.domain().diameter(),
            ratio: 1.05,
        }
    }

    pub fn radii(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut r = self.r_min;
        loop {
            out.push(r.min(self.r_max));
            if r >= self.r_max {
                break;
            }
            r *= self.ratio;
        }
        out
    }

    /// Whether the grid satisfies the resolution requirements for `mesh`.
    pub fn is_adequate_for(&self, mesh: &Triangulation) -> bool {
        self.r_min <= mesh.mesh_size() / 4.0
            && self.r_max >= 2.0 * mesh.domain().diameter()
            && self.ratio > 1.0
            && self.ratio <= 1.1
    }
}

/// Base polar resolution; doubled until successive sups agree to 0.5%.
pub const BASE_THETA: usize = 64;
pub const BASE_RHO: usize = 16;
const MAX_DOUBLINGS: usize = 2;

/// `(1/πr²) ∫_{B(z,r)} |f|` with the default 64×16 polar rule.
pub fn ball_average(f: &PiecewiseField, z: Point, r: f64) -> f64 {
    ball_average_with(f, z, r, &PolarRule::new(BASE_THETA, BASE_RHO))
}

/// For centres inside the (convex) domain every ray leaves Ω exactly once, so
/// the radial rule is mapped onto `[0, min(r, exit)]` and the jump of the
/// zero extension never falls between nodes.
pub fn ball_average_with(f: &PiecewiseField, z: Point, r: f64, rule: &PolarRule) -> f64 {
    let domain = f.mesh().domain();
    if !domain.contains(z, 0.0) {
        let mut s = 0.0;
        for (o, w) in rule.offsets.iter().zip(&rule.weights) {
            s += w * norm2(f.eval([z[0] + r * o[0], z[1] + r * o[1]]));
        }
        return s / PI;
    }
    let mut s = 0.0;
    for ray in 0..rule.n_theta {
        let range = ray * rule.n_rho..(ray + 1) * rule.n_rho;
        let o = rule.offsets[range.start];
        let len = o[0].hypot(o[1]);
        let dir = [o[0] / len, o[1] / len];
        let scale = (domain.ray_exit(z, dir) / r).min(1.0);
        if scale <= 0.0 {
            continue;
        }
        let mut ray_sum = 0.0;
        for (o, w) in rule.offsets[range.clone()].iter().zip(&rule.weights[range]) {
            ray_sum += w * norm2(f.eval([z[0] + r * scale * o[0], z[1] + r * scale * o[1]]));
        }
        s += ray_sum * scale * scale;
    }
    s / PI
}

/// Supremum of ball averages over the grid for one fixed polar rule.
pub fn maximal_value_with(f: &PiecewiseField, z: Point, grid: &RadiusGrid, rule: &PolarRule) -> f64 {
    grid.radii()
        .into_iter()
        .map(|r| ball_average_with(f, z, r, rule))
        .fold(0.0, f64::max)
}

/// `M[f](z)` on the grid, doubling the polar resolution until two successive
/// estimates agree to 0.5% (at most two doublings).
pub fn maximal_value(f: &PiecewiseField, z: Point, grid: &RadiusGrid) -> f64 {
    let (mut nt, mut nr) = (BASE_THETA, BASE_RHO);
    let mut previous = maximal_value_with(f, z, grid, &PolarRule::new(nt, nr));
    for _ in 0..MAX_DOUBLINGS {
        nt *= 2;
        nr *= 2;
        let current = maximal_value_with(f, z, grid, &PolarRule::new(nt, nr));
        let settled = (current - previous).abs() <= 0.005 * current.abs();
        previous = current;
        if settled {
            break;
        }
    }
    previous
}

/// Brute-force reference for [`maximal_value`]: 2000 geometric radii over the
/// same range, with ball integrals accumulated annulus by annulus on 256
/// angles (64 Gauss radii inside the smallest ball, 3 per annulus).
pub fn maximal_oracle(f: &PiecewiseField, z: Point) -> f64 {
    const N_RADII: usize = 2000;
    const N_THETA: usize = 256;
    let grid = RadiusGrid::for_mesh(f.mesh());
    let ratio = (grid.r_max / grid.r_min).powf(1.0 / (N_RADII - 1) as f64);
    let dtheta = 2.0 * PI / N_THETA as f64;
    let dirs: Vec<(f64, f64)> = (0..N_THETA)
        .map(|k| ((k as f64 + 0.25) * dtheta).sin_cos())
        .collect();

    let ring = |r0: f64, r1: f64, nodes: &(Vec<f64>, Vec<f64>)| -> f64 {
        let mut s = 0.0;
        for (x, w) in nodes.0.iter().zip(&nodes.1) {
            let rho = r0 + (r1 - r0) * x;
            let mut a = 0.0;
            for (sn, cs) in &dirs {
                a += norm2(f.eval([z[0] + rho * cs, z[1] + rho * sn]));
            }
            s += w * (r1 - r0) * rho * a * dtheta;
        }
        s
    };

    let inner = gauss_legendre(64);
    let shell = gauss_legendre(3);
    let mut r = grid.r_min;
    let mut integral = ring(0.0, r, &inner);
    let mut best = integral / (PI * r * r);
    for _ in 1..N_RADII {
        let next = r * ratio;
        integral += ring(r, next, &shell);
        r = next;
        best = best.max(integral / (PI * r * r));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{mesh_at_level, ConvexPolygon};
    use std::sync::Arc;

    fn square(level: usize) -> Arc<Triangulation> {
        Arc::new(mesh_at_level(&ConvexPolygon::unit_square(), level).unwrap())
    }

    #[test]
    fn grid_covers_range() {
        let mesh = square(3);
        let grid = RadiusGrid::for_mesh(&mesh);
        assert!(grid.is_adequate_for(&mesh));
        let r = grid.radii();
        assert_eq!(r[0], grid.r_min);
        assert_eq!(*r.last().unwrap(), grid.r_max);
        assert!(r.windows(2).all(|w| w[1] / w[0] <= 1.05 + 1e-12));
    }

    #[test]
    fn constant_in_small_ball() {
        let mesh = square(2);
        let f = PiecewiseField::constant(mesh, 2.5);
        assert!((ball_average(&f, [0.3, 0.4], 0.01) - 2.5).abs() < 1e-10);
    }

    #[test]
    fn affine_average_is_center_value() {
        let mesh = square(2);
        let f = PiecewiseField::from_fn(mesh, 1, |x| [1.0 + 2.0 * x[0] - x[1], 0.0]);
        let z = [0.4, 0.45];
        assert!((ball_average(&f, z, 0.02) - (1.0 + 0.8 - 0.45)).abs() < 1e-10);
    }

    #[test]
    fn indicator_large_ball() {
        let mesh = square(3);
        let f = PiecewiseField::constant(mesh, 1.0);
        let avg = ball_average_with(&f, [0.5, 0.5], 2.0, &PolarRule::new(256, 64));
        assert!((avg - 1.0 / (4.0 * PI)).abs() < 1e-3, "{avg}");
    }

    #[test]
    fn maximal_of_indicator_and_zero() {
        let mesh = square(2);
        let grid = RadiusGrid::for_mesh(&mesh);
        let one = PiecewiseField::constant(mesh.clone(), 1.7);
        assert!(maximal_value(&one, [0.5, 0.5], &grid) >= 1.7 * (1.0 - 1e-6));
        let zero = PiecewiseField::constant(mesh, 0.0);
        assert_eq!(maximal_value(&zero, [0.5, 0.5], &grid), 0.0);
    }

    #[test]
    fn large_radius_tail_is_decreasing() {
        let mesh = square(2);
        let f = PiecewiseField::from_fn(mesh.clone(), 2, |x| [x[0], x[1] * x[1]]);
        let rule = PolarRule::new(128, 32);
        // ∫|f| over the domain by fine quadrature
        let q = crate::quadrature::QuadratureRule::with_degree(12);
        let mut total = 0.0;
        for t in 0..mesh.n_triangles() {
            for (p, w) in q.points.iter().zip(&q.weights) {
                total += w * mesh.geometry(t).area * f.magnitude(mesh.point_at(t, *p));
            }
        }
        let z = [0.3, 0.7];
        let mut last = f64::INFINITY;
        let diam = mesh.domain().diameter();
        for k in 0..10 {
            let r = 2.0 * diam * 1.2f64.powi(k);
            let a = ball_average_with(&f, z, r, &rule);
            let exact = total / (PI * r * r);
            assert!((a - exact).abs() <= 5e-3 * exact, "r={r}: {a} vs {exact}");
            assert!(a <= last);
            last = a;
        }
    }
}
