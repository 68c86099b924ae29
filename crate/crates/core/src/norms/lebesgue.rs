use crate::field::PiecewiseField;
use crate::norms::{FieldSamples, Weight};

/// `(∫ |f|^p ω)^{1/p}`; `p = ∞` gives the largest sampled magnitude.
pub fn lp_norm(f: &PiecewiseField, p: f64, weight: Option<&Weight>) -> f64 {
    lp_norm_samples(&FieldSamples::for_measure(f, weight), p)
}

pub fn lp_norm_samples(s: &FieldSamples, p: f64) -> f64 {
    assert!(p >= 1.0, "exponent must be at least 1, got {p}");
    if p.is_infinite() {
        return s.sup();
    }
    s.magnitudes
        .iter()
        .zip(&s.measures)
        .map(|(v, m)| m * v.powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// `μ({|f| > t})` for the measure `ω dx`.
pub fn distribution_function(f: &PiecewiseField, t: f64, weight: Option<&Weight>) -> f64 {
    distribution_samples(&FieldSamples::for_measure(f, weight), t)
}

pub fn distribution_samples(s: &FieldSamples, t: f64) -> f64 {
    s.magnitudes
        .iter()
        .zip(&s.measures)
        .filter(|(v, _)| **v > t)
        .map(|(_, m)| m)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{mesh_at_level, ConvexPolygon};
    use std::sync::Arc;

    fn square(level: usize) -> Arc<crate::mesh::Triangulation> {
        Arc::new(mesh_at_level(&ConvexPolygon::unit_square(), level).unwrap())
    }

    #[test]
    fn unit_constant() {
        let f = PiecewiseField::constant(square(2), 1.0);
        for p in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            assert!((lp_norm(&f, p, None) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn weighted_l1_against_dense_grid() {
        let f = PiecewiseField::constant(square(4), 1.0);
        let w = Weight::power(1.0, [0.5, 0.5]);
        let value = lp_norm(&f, 1.0, Some(&w));
        // midpoint rule on a 3163² grid (about 10⁷ points)
        let n = 3163;
        let h = 1.0 / n as f64;
        let mut oracle = 0.0;
        for i in 0..n {
            let x = (i as f64 + 0.5) * h - 0.5;
            for j in 0..n {
                let y = (j as f64 + 0.5) * h - 0.5;
                oracle += (x * x + y * y).sqrt();
            }
        }
        oracle *= h * h;
        assert!((oracle - 0.3826).abs() < 1e-4, "oracle {oracle}");
        let closed = (2f64.sqrt() + (1.0 + 2f64.sqrt()).ln()) / 6.0;
        assert!((oracle - closed).abs() < 1e-6);
        assert!((value - oracle).abs() < 1e-5, "{value} vs {oracle}");
    }

    #[test]
    fn homogeneity() {
        let f = PiecewiseField::from_fn(square(2), 2, |x| [x[0].sin(), x[0] * x[1]]);
        for p in [1.0, 3.0, f64::INFINITY] {
            let a = lp_norm(&f.scaled(-3.5), p, None);
            let b = 3.5 * lp_norm(&f, p, None);
            assert!((a - b).abs() <= 1e-12 * b);
        }
    }

    #[test]
    fn distribution_of_indicator() {
        let mesh = square(2);
        // descendants of the fan triangle on the bottom edge: |E| = 0.25
        let values: Vec<f64> = (0..mesh.n_triangles())
            .map(|t| {
                let c = mesh.centroid(t);
                if c[1] < c[0].min(1.0 - c[0]) {
                    2.0
                } else {
                    0.0
                }
            })
            .collect();
        let f = PiecewiseField::element_constants(mesh, &values);
        assert!((distribution_function(&f, 1.0, None) - 0.25).abs() < 1e-14);
        assert_eq!(distribution_function(&f, 3.0, None), 0.0);
        assert!(distribution_function(&f, 0.0, None) <= 1.0 + 1e-14);
    }

    #[test]
    fn distribution_is_nonincreasing() {
        let f = PiecewiseField::from_fn(square(3), 1, |x| [(6.0 * x[0]).sin() * x[1], 0.0]);
        let s = FieldSamples::new(&f);
        let mut last = f64::INFINITY;
        for i in 0..50 {
            let m = distribution_samples(&s, i as f64 / 49.0);
            assert!(m <= last);
            last = m;
        }
    }
}
