//! Lower estimates of the Muckenhoupt A_p constant of a weight.
//!
//! The supremum over all squares is replaced by a dyadic hierarchy over the
//! bounding square of the domain plus, for every singular point of the
//! weight, the squares centred there. Averages are built from the finest
//! cells (3×3 Gauss points each), so refining `max_level` resolves
//! non-integrable singularities progressively better.

use crate::mesh::Point;
use crate::norms::Weight;
use crate::quadrature::gauss_legendre;

/// Per-cell averages on an `n × n` grid of cells of side `cell` starting at
/// `origin`: (avg ω, avg σ, max ω⁻¹) where σ = ω^{−1/(p−1)}.
struct CellGrid {
    n: usize,
    w: Vec<f64>,
    sigma: Vec<f64>,
    inv_max: Vec<f64>,
}

impl CellGrid {
    fn new(weight: &Weight, p: f64, origin: Point, cell: f64, n: usize) -> Self {
        let (g, gw) = gauss_legendre(3);
        let mut w = vec![0.0; n * n];
        let mut sigma = vec![0.0; n * n];
        let mut inv_max = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let (mut aw, mut asig, mut imax) = (0.0, 0.0, 0.0f64);
                for (a, wa) in g.iter().zip(&gw) {
                    for (b, wb) in g.iter().zip(&gw) {
                        let x = [
                            origin[0] + (i as f64 + a) * cell,
                            origin[1] + (j as f64 + b) * cell,
                        ];
                        let v = weight.eval(x);
                        aw += wa * wb * v;
                        if p > 1.0 {
                            asig += wa * wb * v.powf(-1.0 / (p - 1.0));
                        }
                        imax = imax.max(1.0 / v);
                    }
                }
                w[i * n + j] = aw;
                sigma[i * n + j] = asig;
                inv_max[i * n + j] = imax;
            }
        }
        Self { n, w, sigma, inv_max }
    }

    /// A_p product over the block of cells `[i0, i0+m) × [j0, j0+m)`.
    fn block(&self, p: f64, i0: usize, j0: usize, m: usize) -> f64 {
        let (mut aw, mut other) = (0.0, 0.0f64);
        for i in i0..i0 + m {
            for j in j0..j0 + m {
                let k = i * self.n + j;
                aw += self.w[k];
                if p > 1.0 {
                    other += self.sigma[k];
                } else {
                    other = other.max(self.inv_max[k]);
                }
            }
        }
        let cells = (m * m) as f64;
        let avg_w = aw / cells;
        let value = if p > 1.0 {
            avg_w * (other / cells).powf(p - 1.0)
        } else {
            avg_w * other
        };
        if value.is_nan() {
            f64::INFINITY
        } else {
            value
        }
    }
}

/// Largest `(avg_Q ω)(avg_Q ω^{−1/(p−1)})^{p−1}` (or `(avg_Q ω)·sup_Q ω⁻¹`
/// for `p = 1`) over dyadic squares of levels `0..=max_level` and squares
/// centred at the weight's singular points. Infinite averages give `+∞`.
pub fn muckenhoupt_estimate(weight: &Weight, domain: &crate::mesh::ConvexPolygon, p: f64, max_level: usize) -> f64 {
    assert!(p >= 1.0, "A_p requires p >= 1, got {p}");
    let (lo, hi) = domain.bounding_box();
    let side = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let n = 1usize << max_level;
    let cell = side / n as f64;

    let mut best: f64 = 0.0;
    let grid = CellGrid::new(weight, p, lo, cell, n);
    for level in 0..=max_level {
        let m = n >> level;
        for a in 0..(1 << level) {
            for b in 0..(1 << level) {
                best = best.max(grid.block(p, a * m, b * m, m));
            }
        }
    }

    for s in &weight.singular_points {
        let origin = [s[0] - side / 2.0, s[1] - side / 2.0];
        let grid = CellGrid::new(weight, p, origin, cell, n);
        for level in 0..=max_level {
            let m = n >> level;
            if (n - m) % 2 == 0 {
                let i0 = (n - m) / 2;
                best = best.max(grid.block(p, i0, i0, m));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::ConvexPolygon;

    #[test]
    fn constant_weight() {
        let sq = ConvexPolygon::unit_square();
        for p in [1.0, 1.5, 2.0, 4.0] {
            let e = muckenhoupt_estimate(&Weight::one(), &sq, p, 4);
            assert!((e - 1.0).abs() < 1e-12, "p={p}: {e}");
        }
    }

    #[test]
    fn power_weight_in_a2_stabilizes() {
        let sq = ConvexPolygon::unit_square();
        let w = Weight::power(1.0, [0.5, 0.5]);
        let e6 = muckenhoupt_estimate(&w, &sq, 2.0, 6);
        let e8 = muckenhoupt_estimate(&w, &sq, 2.0, 8);
        assert!((e8 - e6).abs() < 0.1 * e6, "{e6} vs {e8}");
    }

    #[test]
    fn power_weight_outside_a2_diverges() {
        let sq = ConvexPolygon::unit_square();
        let w = Weight::power(-3.0, [0.5, 0.5]);
        let e: Vec<f64> = [4, 6, 8].iter().map(|&l| muckenhoupt_estimate(&w, &sq, 2.0, l)).collect();
        assert!(e[1] > 2.0 * e[0] && e[2] > 2.0 * e[1], "{e:?}");
    }
}
