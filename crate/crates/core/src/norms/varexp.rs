//! Weighted variable-exponent Luxemburg norms.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::PiecewiseField;
use crate::mesh::{dist, ConvexPolygon, Point};
use crate::norms::{bisect_modular, lp_norm_samples, FieldSamples, Weight};
use crate::stats::halton_points;

/// An exponent `p: Ω → [1, ∞)`.
#[derive(Clone)]
pub struct VariableExponent {
    name: String,
    eval: Arc<dyn Fn(Point) -> f64 + Send + Sync>,
    /// Sampled infimum over Ω.
    pub p_minus: f64,
}

impl fmt::Debug for VariableExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VariableExponent")
            .field("name", &self.name)
            .field("p_minus", &self.p_minus)
            .finish()
    }
}

impl VariableExponent {
    pub fn new(
        name: impl Into<String>,
        domain: &ConvexPolygon,
        eval: impl Fn(Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let p_minus = halton_points(domain, 4096, 0, 0.0)
            .into_iter()
            .chain(domain.vertices().iter().copied())
            .map(&eval)
            .fold(f64::INFINITY, f64::min);
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            p_minus,
        }
    }

    pub fn constant(p: f64) -> Self {
        Self {
            name: format!("{p}"),
            eval: Arc::new(move |_| p),
            p_minus: p,
        }
    }

    /// `p(x, y) = p0 + px·x + py·y`.
    pub fn affine(p0: f64, px: f64, py: f64, domain: &ConvexPolygon) -> Self {
        Self::new(format!("{p0}+{px}x+{py}y"), domain, move |x| p0 + px * x[0] + py * x[1])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, x: Point) -> f64 {
        (self.eval)(x)
    }

    /// Fitted log-Hölder constant: the largest
    /// `|1/p(x) − 1/p(y)|·log(e + 1/|x − y|)` over random pairs in Ω.
    pub fn log_holder_constant(&self, domain: &ConvexPolygon, n_pairs: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = domain.bounding_box();
        let sample = |rng: &mut ChaCha8Rng| loop {
            let x = [rng.gen_range(lo[0]..hi[0]), rng.gen_range(lo[1]..hi[1])];
            if domain.contains(x, 0.0) {
                return x;
            }
        };
        let mut c: f64 = 0.0;
        for _ in 0..n_pairs {
            let x = sample(&mut rng);
            let y = sample(&mut rng);
            let d = dist(x, y);
            if d == 0.0 {
                continue;
            }
            let q = (1.0 / self.eval(x) - 1.0 / self.eval(y)).abs();
            c = c.max(q * (std::f64::consts::E + 1.0 / d).ln());
        }
        c
    }
}

/// `inf{λ > 0 : ∫ |f ω / λ|^{p(x)} ≤ 1}`.
pub fn varexp_norm(f: &PiecewiseField, p: &VariableExponent, weight: &Weight) -> f64 {
    varexp_norm_samples(&FieldSamples::new(f), p, weight)
}

pub fn varexp_norm_samples(s: &FieldSamples, p: &VariableExponent, weight: &Weight) -> f64 {
    assert!(p.p_minus >= 1.0, "exponent below one: {}", p.p_minus);
    let terms: Vec<(f64, f64, f64)> = s
        .points
        .iter()
        .zip(&s.magnitudes)
        .zip(&s.measures)
        .map(|((x, v), m)| (v * weight.eval(*x), p.eval(*x), *m))
        .collect();
    let sup = terms.iter().map(|t| t.0).fold(0.0, f64::max);
    if sup == 0.0 {
        return 0.0;
    }
    let start = lp_norm_samples(s, 1.0) + sup;
    bisect_modular(start, |lambda| {
        terms.iter().map(|(v, p, m)| m * (v / lambda).powf(*p)).sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::mesh_at_level;
    use crate::norms::lp_norm;
    use crate::quadrature::gauss_legendre;

    fn square_mesh() -> Arc<crate::mesh::Triangulation> {
        Arc::new(mesh_at_level(&ConvexPolygon::unit_square(), 3).unwrap())
    }

    #[test]
    fn constant_exponent_is_lp() {
        let f = PiecewiseField::from_fn(square_mesh(), 2, |x| [x[0].exp(), (3.0 * x[1]).sin()]);
        for p in [1.0, 2.5, 6.0] {
            let a = varexp_norm(&f, &VariableExponent::constant(p), &Weight::one());
            let b = lp_norm(&f, p, None);
            assert!((a - b).abs() <= 1e-6 * b, "p={p}: {a} vs {b}");
        }
    }

    #[test]
    fn homogeneity() {
        let sq = ConvexPolygon::unit_square();
        let f = PiecewiseField::from_fn(square_mesh(), 1, |x| [x[0] - x[1] * x[1], 0.0]);
        let p = VariableExponent::affine(2.0, 1.0, 0.0, &sq);
        let a = varexp_norm(&f.scaled(-3.0), &p, &Weight::one());
        let b = 3.0 * varexp_norm(&f, &p, &Weight::one());
        assert!((a - b).abs() <= 1e-8 * b);
    }

    /// Independent oracle: solve ∫₀¹ ((1+x)/λ)^{2+x} dx = 1 with 1D Gauss
    /// quadrature and Newton's method.
    #[test]
    fn affine_exponent_against_1d_oracle() {
        let sq = ConvexPolygon::unit_square();
        let p = VariableExponent::affine(2.0, 1.0, 0.0, &sq);
        assert_eq!(p.p_minus, 2.0);

        let (x, w) = gauss_legendre(40);
        let modular = |l: f64| -> (f64, f64) {
            x.iter().zip(&w).fold((0.0, 0.0), |(v, d), (x, w)| {
                let e = ((1.0 + x) / l).powf(2.0 + x);
                (v + w * e, d - w * (2.0 + x) * e / l)
            })
        };
        let mut lambda = 1.5;
        for _ in 0..60 {
            let (v, d) = modular(lambda);
            lambda -= (v - 1.0) / d;
        }
        assert!((modular(lambda).0 - 1.0).abs() < 1e-13);

        let f = PiecewiseField::from_fn(square_mesh(), 1, |x| [1.0 + x[0], 0.0]);
        let got = varexp_norm(&f, &p, &Weight::one());
        assert!((got - lambda).abs() < 1e-6 * lambda, "{got} vs {lambda}");

        let one = PiecewiseField::constant(square_mesh(), 1.0);
        assert!((varexp_norm(&one, &p, &Weight::one()) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn log_holder_of_affine_exponent_is_finite() {
        let sq = ConvexPolygon::unit_square();
        let c = VariableExponent::affine(2.0, 1.0, 0.0, &sq).log_holder_constant(&sq, 10_000, 7);
        assert!(c.is_finite() && c > 0.0 && c < 1.0, "{c}");
        assert_eq!(VariableExponent::constant(3.0).log_holder_constant(&sq, 100, 1), 0.0);
    }

    #[test]
    fn zero_field() {
        let f = PiecewiseField::constant(square_mesh(), 0.0);
        assert_eq!(varexp_norm(&f, &VariableExponent::constant(2.0), &Weight::one()), 0.0);
    }
}
