use std::fmt;
use std::sync::Arc;

use crate::mesh::{ConvexPolygon, Point};
use crate::stats::halton_points;

/// A nonnegative locally integrable weight ω.
#[derive(Clone)]
pub struct Weight {
    name: String,
    eval: Arc<dyn Fn(Point) -> f64 + Send + Sync>,
    /// `Some(p)` when the weight is claimed to lie in the Muckenhoupt class A_p.
    pub claimed_class: Option<f64>,
    /// Points where the weight degenerates; squares centred there are added
    /// to the Muckenhoupt probe.
    pub singular_points: Vec<Point>,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Weight")
            .field("name", &self.name)
            .field("claimed_class", &self.claimed_class)
            .field("singular_points", &self.singular_points)
            .finish()
    }
}

impl Weight {
    pub fn new(name: impl Into<String>, eval: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            claimed_class: None,
            singular_points: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::new("one", |_| 1.0)
    }

    /// `|x − center|^β`. In two dimensions this is in A_p iff −2 < β < 2(p − 1).
    pub fn power(beta: f64, center: Point) -> Self {
        let mut w = Self::new(format!("power(beta={beta};center={}/{})", center[0], center[1]), move |x| {
            ((x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2)).powf(beta / 2.0)
        });
        if beta > -2.0 && beta < 2.0 {
            w.claimed_class = Some(2.0);
        }
        w.singular_points = vec![center];
        w
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, x: Point) -> f64 {
        (self.eval)(x)
    }

    /// Smallest value over `n` quasi-random points of the domain.
    pub fn sampled_minimum(&self, domain: &ConvexPolygon, n: usize) -> f64 {
        halton_points(domain, n, 0, 0.0)
            .into_iter()
            .map(|x| self.eval(x))
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_weight_is_nonnegative() {
        let w = Weight::power(1.0, [0.5, 0.5]);
        assert!(w.sampled_minimum(&ConvexPolygon::unit_square(), 10_000) >= 0.0);
        assert_eq!(w.claimed_class, Some(2.0));
        assert!((w.eval([0.5, 1.5]) - 1.0).abs() < 1e-15);
        assert_eq!(Weight::power(-3.0, [0.0, 0.0]).claimed_class, None);
    }
}
