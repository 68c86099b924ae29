//! Luxemburg norms, the ∇₂ condition and Simonenko indices.

use std::fmt;
use std::sync::Arc;

use log::warn;

use crate::field::PiecewiseField;
use crate::norms::{bisect_modular, lp_norm_samples, FieldSamples};

/// A Young function φ: (0, ∞) → (0, ∞).
#[derive(Clone)]
pub struct OrliczFunction {
    name: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub claimed_nabla2_constant: Option<f64>,
}

impl fmt::Debug for OrliczFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrliczFunction")
            .field("name", &self.name)
            .field("claimed_nabla2_constant", &self.claimed_nabla2_constant)
            .finish()
    }
}

impl OrliczFunction {
    pub fn new(name: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            claimed_nabla2_constant: None,
        }
    }

    /// `t^p`; satisfies ∇₂ with any `a ≥ 2^{1/(p−1)}`.
    pub fn power(p: f64) -> Self {
        let mut phi = Self::new(format!("t^{p}"), move |t| t.powf(p));
        if p > 1.0 {
            phi.claimed_nabla2_constant = Some(2f64.powf(1.0 / (p - 1.0)));
        }
        phi
    }

    pub fn exp_minus_one() -> Self {
        Self::new("exp(t)-1", f64::exp_m1)
    }

    pub fn t2_log() -> Self {
        Self::new("t^2*log(e+t)", |t| t * t * (std::f64::consts::E + t).ln())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// Sampled N-function conditions: increasing, φ(0+) → 0, φ(t)/t → ∞.
    pub fn looks_like_n_function(&self) -> bool {
        let grid = log_grid(1e-6, 1e6, 241);
        let increasing = grid.windows(2).all(|w| self.eval(w[1]) > self.eval(w[0]));
        let vanishes = self.eval(1e-9) < 1e-6;
        let superlinear = self.eval(1e6) / 1e6 > 1e3 * (self.eval(1.0) / 1.0);
        increasing && vanishes && superlinear
    }
}

/// Luxemburg norm `inf{λ > 0 : ∫ φ(|f|/λ) ≤ 1}` by bisection.
pub fn orlicz_norm(f: &PiecewiseField, phi: &OrliczFunction) -> f64 {
    orlicz_norm_samples(&FieldSamples::new(f), phi)
}

pub fn orlicz_norm_samples(s: &FieldSamples, phi: &OrliczFunction) -> f64 {
    let sup = s.sup();
    if sup == 0.0 {
        return 0.0;
    }
    let start = lp_norm_samples(s, 1.0) + sup;
    bisect_modular(start, |lambda| {
        s.magnitudes
            .iter()
            .zip(&s.measures)
            .map(|(v, m)| m * phi.eval(v / lambda))
            .sum()
    })
}

/// Outcome of a ∇₂ check: whether `2a·φ(t) ≤ φ(at)` held on the grid and
/// the largest ratio `2a·φ(t)/φ(at)` seen.
#[derive(Debug, Clone, Copy)]
pub struct Nabla2Report {
    pub holds: bool,
    pub worst_ratio: f64,
}

pub fn nabla2_check(phi: &OrliczFunction, a: f64) -> Nabla2Report {
    nabla2_check_on(phi, a, &log_grid(1e-6, 1e6, 1201))
}

pub fn nabla2_check_on(phi: &OrliczFunction, a: f64, t_grid: &[f64]) -> Nabla2Report {
    assert!(a > 1.0, "the ∇₂ constant must exceed 1");
    let mut holds = true;
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        let lhs = 2.0 * a * phi.eval(t);
        let rhs = phi.eval(a * t);
        if lhs > rhs * (1.0 + 1e-12) {
            holds = false;
        }
        if rhs.is_finite() && rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
    }
    Nabla2Report {
        holds,
        worst_ratio: worst,
    }
}

/// Estimates of the lower and upper Simonenko indices,
/// `log h(λ)/log λ` at `λ = 10⁻⁴` and `λ = 10⁴`.
pub fn simonenko_indices(phi: &OrliczFunction) -> (f64, f64) {
    (simonenko_estimate(phi, 1e-4), simonenko_estimate(phi, 1e4))
}

/// `log h_φ(λ) / log λ` with `h_φ(λ) = sup_t φ(λt)/φ(t)` over a log grid of t
/// in `[10⁻⁶, 10⁶]`, shrunk from above if φ overflows.
pub fn simonenko_estimate(phi: &OrliczFunction, lambda: f64) -> f64 {
    let mut t_max = 1e6;
    let stretch = lambda.max(1.0);
    while !(phi.eval(stretch * t_max).is_finite()) && t_max > 1e-5 {
        t_max /= 1.5;
    }
    if t_max < 1e6 {
        warn!(
            "{}: grid for the Simonenko index at lambda={lambda:e} shrunk to t <= {t_max:.3e}",
            phi.name()
        );
    }
    let h = log_grid(1e-6, t_max, 2401)
        .into_iter()
        .map(|t| phi.eval(lambda * t) / phi.eval(t))
        .filter(|r| r.is_finite())
        .fold(0.0, f64::max);
    h.ln() / lambda.ln()
}

pub(crate) fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
