//! Piecewise polynomial (possibly discontinuous) fields on a triangulation,
//! extended by zero outside the domain.

use std::fmt;
use std::sync::Arc;

use crate::fem::{eval_basis, AnalyticFunction, FeFunction};
use crate::mesh::{Point, Triangulation};

type PointFn = Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>;

#[derive(Clone)]
enum Source {
    FeGradient(FeFunction),
    FeValue(FeFunction),
    Analytic(PointFn),
    /// Local Lagrange coefficients (per component) of degree 0, 1 or 2.
    ElementTable {
        degree: usize,
        coefficients: Arc<Vec<[[f64; 2]; 6]>>,
    },
    Combination(Vec<(f64, PiecewiseField)>),
}

/// A scalar or 2-vector field on a mesh. Evaluation outside the domain is 0.
///
/// The mesh also serves as the integration mesh for norms; analytic sources
/// are integrated element by element on it.
#[derive(Clone)]
pub struct PiecewiseField {
    mesh: Arc<Triangulation>,
    components: usize,
    source: Source,
}

impl fmt::Debug for PiecewiseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            Source::FeGradient(_) => "fe-gradient",
            Source::FeValue(_) => "fe-value",
            Source::Analytic(_) => "analytic",
            Source::ElementTable { .. } => "element-table",
            Source::Combination(_) => "combination",
        };
        f.debug_struct("PiecewiseField")
            .field("source", &kind)
            .field("components", &self.components)
            .field("n_triangles", &self.mesh.n_triangles())
            .finish()
    }
}

impl PiecewiseField {
    pub fn fe_gradient(f: &FeFunction) -> Self {
        Self {
            mesh: f.space().mesh().clone(),
            components: 2,
            source: Source::FeGradient(f.clone()),
        }
    }

    pub fn fe_value(f: &FeFunction) -> Self {
        Self {
            mesh: f.space().mesh().clone(),
            components: 1,
            source: Source::FeValue(f.clone()),
        }
    }

    pub fn analytic_gradient(u: &AnalyticFunction, mesh: Arc<Triangulation>) -> Self {
        let u = u.clone();
        Self::from_fn(mesh, 2, move |x| u.gradient(x))
    }

    pub fn analytic_value(u: &AnalyticFunction, mesh: Arc<Triangulation>) -> Self {
        let u = u.clone();
        Self::from_fn(mesh, 1, move |x| [u.value(x), 0.0])
    }

    /// Closed-form field; `components` is 1 (first slot used) or 2.
    pub fn from_fn(
        mesh: Arc<Triangulation>,
        components: usize,
        f: impl Fn(Point) -> [f64; 2] + Send + Sync + 'static,
    ) -> Self {
        assert!(components == 1 || components == 2);
        Self {
            mesh,
            components,
            source: Source::Analytic(Arc::new(f)),
        }
    }

    pub fn constant(mesh: Arc<Triangulation>, c: f64) -> Self {
        Self::from_fn(mesh, 1, move |_| [c, 0.0])
    }

    /// Scalar field constant on each element.
    pub fn element_constants(mesh: Arc<Triangulation>, values: &[f64]) -> Self {
        assert_eq!(values.len(), mesh.n_triangles());
        let coefficients = values.iter().map(|&v| [[v, 0.0]; 6]).collect();
        Self {
            mesh,
            components: 1,
            source: Source::ElementTable {
                degree: 0,
                coefficients: Arc::new(coefficients),
            },
        }
    }

    /// Element-wise Lagrange polynomials of degree 1 or 2 given by local nodal
    /// values (local ordering as in [`crate::fem::local_nodes`]).
    pub fn element_table(
        mesh: Arc<Triangulation>,
        degree: usize,
        components: usize,
        coefficients: Vec<[[f64; 2]; 6]>,
    ) -> Self {
        assert!(degree <= 2 && (components == 1 || components == 2));
        assert_eq!(coefficients.len(), mesh.n_triangles());
        Self {
            mesh,
            components,
            source: Source::ElementTable {
                degree,
                coefficients: Arc::new(coefficients),
            },
        }
    }

    /// `Σ cᵢ fᵢ`, integrated on the first term's mesh.
    pub fn linear_combination(terms: Vec<(f64, PiecewiseField)>) -> Self {
        assert!(!terms.is_empty());
        let mesh = terms[0].1.mesh.clone();
        let components = terms.iter().map(|(_, f)| f.components).max().unwrap();
        Self {
            mesh,
            components,
            source: Source::Combination(terms),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::linear_combination(vec![(c, self.clone())])
    }

    pub fn plus(&self, other: &PiecewiseField) -> Self {
        Self::linear_combination(vec![(1.0, self.clone()), (1.0, other.clone())])
    }

    pub fn minus(&self, other: &PiecewiseField) -> Self {
        Self::linear_combination(vec![(1.0, self.clone()), (-1.0, other.clone())])
    }

    pub fn mesh(&self) -> &Arc<Triangulation> {
        &self.mesh
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Value at `x`; exactly zero outside the domain.
    pub fn eval(&self, x: Point) -> [f64; 2] {
        match &self.source {
            Source::Analytic(f) => {
                if self.mesh.domain().contains(x, 1e-12 * self.mesh.domain().diameter()) {
                    f(x)
                } else {
                    [0.0, 0.0]
                }
            }
            Source::Combination(terms) => combine(terms.iter().map(|(c, f)| (*c, f.eval(x)))),
            _ => match self.mesh.locate_point(x) {
                Some((t, bary)) => self.eval_located(t, bary, x),
                None => [0.0, 0.0],
            },
        }
    }

    /// Value at a point already located in element `t` of this field's mesh.
    pub fn eval_located(&self, t: usize, bary: [f64; 3], x: Point) -> [f64; 2] {
        match &self.source {
            Source::FeGradient(f) => f.eval_local(t, bary).1,
            Source::FeValue(f) => [f.eval_local(t, bary).0, 0.0],
            Source::Analytic(f) => f(x),
            Source::ElementTable {
                degree,
                coefficients,
            } => {
                let c = &coefficients[t];
                if *degree == 0 {
                    return c[0];
                }
                let basis = eval_basis(*degree, bary).expect("degree checked at construction");
                let mut v = [0.0; 2];
                for i in 0..basis.len {
                    v[0] += c[i][0] * basis.values[i];
                    v[1] += c[i][1] * basis.values[i];
                }
                v
            }
            Source::Combination(terms) => combine(terms.iter().map(|(c, f)| {
                let v = if Arc::ptr_eq(&f.mesh, &self.mesh) {
                    f.eval_located(t, bary, x)
                } else {
                    f.eval(x)
                };
                (*c, v)
            })),
        }
    }

    /// Euclidean magnitude at `x`.
    pub fn magnitude(&self, x: Point) -> f64 {
        norm2(self.eval(x))
    }
}

#[inline]
pub fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn combine(terms: impl Iterator<Item = (f64, [f64; 2])>) -> [f64; 2] {
    terms.fold([0.0, 0.0], |acc, (c, v)| [acc[0] + c * v[0], acc[1] + c * v[1]])
}
