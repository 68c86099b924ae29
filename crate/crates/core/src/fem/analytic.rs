use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mesh::{ConvexPolygon, Point};

type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>;

/// A closed-form function with its gradient. Outside the domain it is
/// extended by zero by whoever evaluates it against a mesh.
#[derive(Clone)]
pub struct AnalyticFunction {
    name: String,
    value: ScalarFn,
    gradient: GradFn,
    vanishes_on_boundary: bool,
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("name", &self.name)
            .field("vanishes_on_boundary", &self.vanishes_on_boundary)
            .finish()
    }
}

impl AnalyticFunction {
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(Point) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(Point) -> [f64; 2] + Send + Sync + 'static,
        vanishes_on_boundary: bool,
    ) -> Self {
        Self {
            name: name.into(),
            value: Arc::new(value),
            gradient: Arc::new(gradient),
            vanishes_on_boundary,
        }
    }

    pub fn zero() -> Self {
        Self::new("zero", |_| 0.0, |_| [0.0, 0.0], true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vanishes_on_boundary(&self) -> bool {
        self.vanishes_on_boundary
    }

    #[inline]
    pub fn value(&self, x: Point) -> f64 {
        (self.value)(x)
    }

    #[inline]
    pub fn gradient(&self, x: Point) -> [f64; 2] {
        (self.gradient)(x)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &AnalyticFunction, b: f64) -> Self {
        let (f, g) = (self.clone(), other.clone());
        let (f2, g2) = (self.clone(), other.clone());
        Self::new(
            format!("{a}*{}+{b}*{}", self.name, other.name),
            move |x| a * f.value(x) + b * g.value(x),
            move |x| {
                let (u, v) = (f2.gradient(x), g2.gradient(x));
                [a * u[0] + b * v[0], a * u[1] + b * v[1]]
            },
            self.vanishes_on_boundary && other.vanishes_on_boundary,
        )
    }

    /// Largest |value| over `n` equally spaced boundary samples.
    pub fn max_boundary_value(&self, domain: &ConvexPolygon, n: usize) -> f64 {
        (0..n)
            .map(|i| self.value(domain.boundary_point(i as f64 / n as f64)).abs())
            .fold(0.0, f64::max)
    }

    /// Worst relative mismatch between the gradient and central differences
    /// at `n` random interior points.
    pub fn gradient_fd_mismatch(&self, domain: &ConvexPolygon, n: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = domain.bounding_box();
        let step = 1e-6 * domain.diameter();
        let mut worst: f64 = 0.0;
        let mut count = 0;
        while count < n {
            let x = [rng.gen_range(lo[0]..hi[0]), rng.gen_range(lo[1]..hi[1])];
            if domain.margin(x) <= 2.0 * step {
                continue;
            }
            count += 1;
            let g = self.gradient(x);
            let fd = [
                (self.value([x[0] + step, x[1]]) - self.value([x[0] - step, x[1]])) / (2.0 * step),
                (self.value([x[0], x[1] + step]) - self.value([x[0], x[1] - step])) / (2.0 * step),
            ];
            let scale = (g[0].hypot(g[1])).max(1.0);
            worst = worst.max((g[0] - fd[0]).hypot(g[1] - fd[1]) / scale);
        }
        worst
    }
}
