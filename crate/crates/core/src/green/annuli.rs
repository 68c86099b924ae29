use crate::mesh::{dist, Point};

/// Dyadic annuli about z: `d_j = 2^j K h`, `A_0 = B_0` and
/// `A_j = {d_{j−1} ≤ |x − z| < d_j}` for `j ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusDecomposition {
    pub z: Point,
    pub h: f64,
    pub k: f64,
    /// `d_0, d_1, …` up to the first radius covering the domain.
    pub radii: Vec<f64>,
}

impl AnnulusDecomposition {
    /// Radii up to the first `d_J ≥ diameter`.
    pub fn new(z: Point, h: f64, k: f64, diameter: f64) -> Self {
        let mut radii = vec![k * h];
        while *radii.last().unwrap() < diameter {
            let next = 2.0 * radii.last().unwrap();
            radii.push(next);
        }
        Self { z, h, k, radii }
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Inner and outer radius of `A_j` widened by `grow` annuli on each side
    /// (`grow = 1` gives A_j⁺, `grow = 2` gives A_j⁺⁺).
    pub fn bounds(&self, j: usize, grow: usize) -> (f64, f64) {
        let inner = if j > grow { self.radii[j - 1 - grow] } else { 0.0 };
        let outer_index = (j + grow).min(self.radii.len() - 1);
        let mut outer = self.radii[outer_index];
        for _ in outer_index..j + grow {
            outer *= 2.0;
        }
        (inner, outer)
    }

    pub fn contains(&self, j: usize, grow: usize, x: Point) -> bool {
        let (a, b) = self.bounds(j, grow);
        let r = dist(x, self.z);
        r >= a && r < b
    }

    /// Index of the annulus containing `x`, or `None` beyond the last radius.
    pub fn index_of(&self, x: Point) -> Option<usize> {
        let r = dist(x, self.z);
        self.radii.iter().position(|&d| r < d)
    }
}
