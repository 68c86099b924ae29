//! Lorentz norms from the distribution function.
//!
//! With sampled data the distribution function is a step function, so the
//! layer-cake integral `q ∫ t^{q−1} μ(t)^{q/p} dt` is evaluated exactly between
//! consecutive sorted magnitudes.

use crate::field::PiecewiseField;
use crate::norms::{FieldSamples, Weight};

pub fn lorentz_norm(f: &PiecewiseField, p: f64, q: f64, weight: Option<&Weight>) -> f64 {
    lorentz_norm_samples(&FieldSamples::for_measure(f, weight), p, q)
}

pub fn lorentz_norm_samples(s: &FieldSamples, p: f64, q: f64) -> f64 {
    assert!(p >= 1.0 && q > 0.0, "invalid Lorentz exponents ({p}, {q})");
    let mut pairs: Vec<(f64, f64)> = s
        .magnitudes
        .iter()
        .zip(&s.measures)
        .filter(|(v, m)| **v > 0.0 && **m > 0.0)
        .map(|(v, m)| (*v, *m))
        .collect();
    if pairs.is_empty() {
        return 0.0;
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    // μ(t) = cumulative measure of the values above t
    let mut cumulative = 0.0;
    if q.is_infinite() {
        let mut best: f64 = 0.0;
        for (v, m) in &pairs {
            cumulative += m;
            best = best.max(v * cumulative.powf(1.0 / p));
        }
        return best;
    }
    let mut integral = 0.0;
    for (i, (v, m)) in pairs.iter().enumerate() {
        cumulative += m;
        let next = pairs.get(i + 1).map_or(0.0, |x| x.0);
        integral += cumulative.powf(q / p) * (v.powf(q) - next.powf(q));
    }
    integral.powf(1.0 / q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{mesh_at_level, ConvexPolygon, Triangulation};
    use crate::norms::lp_norm;
    use std::sync::Arc;

    fn indicator(c: f64) -> (PiecewiseField, f64) {
        let mesh: Arc<Triangulation> =
            Arc::new(mesh_at_level(&ConvexPolygon::unit_square(), 3).unwrap());
        let mut area = 0.0;
        let values: Vec<f64> = (0..mesh.n_triangles())
            .map(|t| {
                let x = mesh.centroid(t);
                if x[0] + 0.3 * x[1] < 0.55 {
                    area += mesh.geometry(t).area;
                    c
                } else {
                    0.0
                }
            })
            .collect();
        (PiecewiseField::element_constants(mesh, &values), area)
    }

    /// Crude independent evaluation: trapezoid in log t on a dense grid.
    fn lorentz_by_grid(s: &FieldSamples, p: f64, q: f64) -> f64 {
        let sup = s.sup();
        let n = 20_000;
        let t_min = 1e-6 * sup;
        let lr = (sup / t_min).ln();
        let mut acc = 0.0;
        let mut prev: Option<f64> = None;
        for i in 0..=n {
            let t = t_min * (lr * i as f64 / n as f64).exp();
            let mu = crate::norms::distribution_samples(s, t * (1.0 - 1e-12));
            let g = q * t.powf(q) * mu.powf(q / p);
            if let Some(pg) = prev {
                acc += 0.5 * (g + pg) * lr / n as f64;
            }
            prev = Some(g);
        }
        acc.powf(1.0 / q)
    }

    #[test]
    fn indicator_closed_form() {
        let c = 1.7;
        let (f, area) = indicator(c);
        for (p, q) in [(2.0, 2.0), (2.0, 4.0), (3.0, 1.5)] {
            let expect = c * area.powf(1.0 / p);
            let got = lorentz_norm(&f, p, q, None);
            assert!((got - expect).abs() <= 5e-3 * expect, "({p},{q}): {got} vs {expect}");
            let grid = lorentz_by_grid(&FieldSamples::new(&f), p, q);
            assert!((grid - expect).abs() <= 5e-3 * expect);
        }
        let weak = lorentz_norm(&f, 2.0, f64::INFINITY, None);
        assert!((weak - c * area.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn q_equals_p_is_lp() {
        let mesh = Arc::new(mesh_at_level(&ConvexPolygon::unit_square(), 3).unwrap());
        let f = PiecewiseField::from_fn(mesh, 2, |x| [(3.0 * x[0]).sin(), x[1] * x[1]]);
        for p in [1.5, 2.0, 4.0] {
            let a = lorentz_norm(&f, p, p, None);
            let b = lp_norm(&f, p, None);
            assert!((a - b).abs() <= 5e-3 * b);
            let grid = lorentz_by_grid(&FieldSamples::new(&f), p, p);
            assert!((grid - b).abs() <= 5e-3 * b, "grid {grid} vs {b}");
        }
    }

    #[test]
    fn zero_field() {
        let mesh = Arc::new(mesh_at_level(&ConvexPolygon::unit_square(), 1).unwrap());
        let f = PiecewiseField::constant(mesh, 0.0);
        assert_eq!(lorentz_norm(&f, 2.0, 4.0, None), 0.0);
        assert_eq!(lorentz_norm(&f, 2.0, f64::INFINITY, None), 0.0);
    }
}
