use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, RitzError};
use crate::field::PiecewiseField;
use crate::mesh::{dist, Point};

/// Rejection-sampling attempts per requested point.
const ATTEMPTS_PER_POINT: usize = 200;

/// Sampling parameters for [`holder_estimate`].
#[derive(Debug, Clone)]
pub struct HolderSampling {
    pub n_pairs: usize,
    pub seed: u64,
    /// Pairs closer than this are redrawn (0 keeps every pair).
    pub min_separation: f64,
    /// Extra points paired with every sampled point.
    pub anchors: Vec<Point>,
}

impl HolderSampling {
    pub fn new(n_pairs: usize, seed: u64) -> Self {
        Self {
            n_pairs,
            seed,
            min_separation: 0.0,
            anchors: Vec::new(),
        }
    }
}

/// Largest `|f(x) − f(y)| / |x − y|^α` (component-wise) over random pairs in
/// `Ω ∩ region`; a lower bound of the Hölder seminorm.
pub fn holder_estimate(
    f: &PiecewiseField,
    region: impl Fn(Point) -> bool,
    alpha: f64,
    sampling: &HolderSampling,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(RitzError::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let domain = f.mesh().domain();
    let (lo, hi) = domain.bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let draw = |rng: &mut ChaCha8Rng| -> Option<Point> {
        for _ in 0..ATTEMPTS_PER_POINT {
            let x = [rng.gen_range(lo[0]..hi[0]), rng.gen_range(lo[1]..hi[1])];
            if domain.contains(x, 0.0) && region(x) {
                return Some(x);
            }
        }
        None
    };
    let quotient = |x: Point, y: Point| -> f64 {
        let d = dist(x, y);
        if d == 0.0 || d < sampling.min_separation {
            return 0.0;
        }
        let (a, b) = (f.eval(x), f.eval(y));
        (a[0] - b[0]).abs().max((a[1] - b[1]).abs()) / d.powf(alpha)
    };

    let mut found = 0;
    let mut best: f64 = 0.0;
    for _ in 0..sampling.n_pairs {
        let (Some(x), Some(y)) = (draw(&mut rng), draw(&mut rng)) else {
            continue;
        };
        found += 1;
        best = best.max(quotient(x, y));
        for &a in &sampling.anchors {
            best = best.max(quotient(a, x));
        }
    }
    if found == 0 {
        return Err(RitzError::InvalidArgument(
            "fewer than two sample points in the Hölder region".into(),
        ));
    }
    Ok(best)
}
