//! Sampled BMO seminorm. Balls are intersected with the domain; there is no
//! zero extension here.

use crate::field::{norm2, PiecewiseField};
use crate::mesh::Point;
use crate::quadrature::PolarRule;
use crate::stats::halton_points;

pub const BMO_POLAR_THETA: usize = 48;
pub const BMO_POLAR_RHO: usize = 12;

/// Normalized mean oscillation `(1/|B∩Ω|) ∫_{B∩Ω} |f − ⟨f⟩_{B∩Ω}|`.
/// Returns 0 when no quadrature point of the ball lies in Ω.
pub fn mean_oscillation(f: &PiecewiseField, x: Point, r: f64, rule: &PolarRule) -> f64 {
    let domain = f.mesh().domain();
    let mut values = Vec::with_capacity(rule.weights.len());
    let mut mass = 0.0;
    let mut mean = [0.0; 2];
    for (o, w) in rule.offsets.iter().zip(&rule.weights) {
        let y = [x[0] + r * o[0], x[1] + r * o[1]];
        if !domain.contains(y, 0.0) {
            continue;
        }
        let v = f.eval(y);
        mass += w;
        mean[0] += w * v[0];
        mean[1] += w * v[1];
        values.push((v, *w));
    }
    if mass == 0.0 {
        return 0.0;
    }
    mean = [mean[0] / mass, mean[1] / mass];
    values
        .iter()
        .map(|(v, w)| w * norm2([v[0] - mean[0], v[1] - mean[1]]))
        .sum::<f64>()
        / mass
}

/// Maximum of the mean oscillation over `n_centers` Halton points of Ω and
/// `n_radii` geometric radii from `h/2` to `diam(Ω)`.
pub fn bmo_seminorm(f: &PiecewiseField, n_centers: usize, n_radii: usize) -> f64 {
    assert!(n_centers >= 1 && n_radii >= 1);
    let mesh = f.mesh();
    let domain = mesh.domain();
    let r_max = domain.diameter();
    let r_min = (mesh.mesh_size() / 2.0).min(r_max);
    let radii: Vec<f64> = if n_radii == 1 {
        vec![r_max / 4.0]
    } else {
        (0..n_radii)
            .map(|j| r_min * (r_max / r_min).powf(j as f64 / (n_radii - 1) as f64))
            .collect()
    };
    let rule = PolarRule::new(BMO_POLAR_THETA, BMO_POLAR_RHO);
    let mut best: f64 = 0.0;
    for x in halton_points(domain, n_centers, 0, 0.0) {
        for &r in &radii {
            best = best.max(mean_oscillation(f, x, r, &rule));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{mesh_at_level, ConvexPolygon};
    use crate::norms::lp_norm;
    use std::sync::Arc;

    fn mesh() -> Arc<crate::mesh::Triangulation> {
        Arc::new(mesh_at_level(&ConvexPolygon::unit_square(), 3).unwrap())
    }

    #[test]
    fn constants_have_no_oscillation() {
        let f = PiecewiseField::constant(mesh(), 3.7);
        assert!(bmo_seminorm(&f, 40, 8) <= 1e-10);
    }

    #[test]
    fn half_square_indicator() {
        let f = PiecewiseField::from_fn(mesh(), 1, |x| [if x[0] < 0.5 { 1.0 } else { 0.0 }, 0.0]);
        let b = bmo_seminorm(&f, 64, 12);
        assert!((0.45..=0.55).contains(&b), "{b}");
        // a ball centred on the interface sees both halves equally
        let rule = PolarRule::new(BMO_POLAR_THETA, BMO_POLAR_RHO);
        let centred = mean_oscillation(&f, [0.5, 0.5], 0.2, &rule);
        assert!((centred - 0.5).abs() < 1e-12, "{centred}");
    }

    #[test]
    fn bounded_by_twice_sup() {
        let f = PiecewiseField::from_fn(mesh(), 2, |x| [(9.0 * x[0]).sin(), x[1] * x[1]]);
        let sup = lp_norm(&f, f64::INFINITY, None);
        assert!(bmo_seminorm(&f, 32, 6) <= 2.0 * sup + 1e-6);
    }
}
