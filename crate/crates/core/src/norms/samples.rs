use crate::field::{norm2, PiecewiseField};
use crate::mesh::Point;
use crate::norms::Weight;
use crate::quadrature::QuadratureRule;

/// Quadrature degree used for every nonlinear functional of a field.
pub const NORM_QUAD_DEGREE: usize = 12;

/// Magnitudes of a field at the quadrature points of its mesh, with the
/// measure of each point (quadrature weight × element area × ω).
#[derive(Debug, Clone)]
pub struct FieldSamples {
    pub points: Vec<Point>,
    pub magnitudes: Vec<f64>,
    pub measures: Vec<f64>,
}

impl FieldSamples {
    pub fn new(f: &PiecewiseField) -> Self {
        Self::with_degree(f, NORM_QUAD_DEGREE)
    }

    pub fn with_degree(f: &PiecewiseField, degree: usize) -> Self {
        let mesh = f.mesh();
        let rule = QuadratureRule::with_degree(degree);
        let n = mesh.n_triangles() * rule.len();
        let mut points = Vec::with_capacity(n);
        let mut magnitudes = Vec::with_capacity(n);
        let mut measures = Vec::with_capacity(n);
        for t in 0..mesh.n_triangles() {
            let area = mesh.geometry(t).area;
            for (p, w) in rule.points.iter().zip(&rule.weights) {
                let x = mesh.point_at(t, *p);
                points.push(x);
                magnitudes.push(norm2(f.eval_located(t, *p, x)));
                measures.push(w * area);
            }
        }
        Self {
            points,
            magnitudes,
            measures,
        }
    }

    /// Samples for `f` under the measure `ω dx` (or `dx` when `None`).
    pub fn for_measure(f: &PiecewiseField, weight: Option<&Weight>) -> Self {
        let s = Self::new(f);
        match weight {
            Some(w) => s.weighted(w),
            None => s,
        }
    }

    pub fn weighted(mut self, w: &Weight) -> Self {
        for (m, x) in self.measures.iter_mut().zip(&self.points) {
            *m *= w.eval(*x);
        }
        self
    }

    pub fn total_measure(&self) -> f64 {
        self.measures.iter().sum()
    }

    /// Largest magnitude at a point of positive measure.
    pub fn sup(&self) -> f64 {
        self.magnitudes
            .iter()
            .zip(&self.measures)
            .filter(|(_, &m)| m > 0.0)
            .map(|(v, _)| *v)
            .fold(0.0, f64::max)
    }
}
