//! Stiffness assembly and the Ritz projection onto V_h.

mod solver;
mod sparse;

use std::sync::Arc;

pub use solver::{conjugate_gradient, solve_dense, solve_spd, CgReport};
pub use sparse::SparseSpdMatrix;

use crate::error::{RitzError, Result};
use crate::fem::{eval_basis, AnalyticFunction, FeFunction, FeSpace};
use crate::mesh::Triangulation;
use crate::quadrature::QuadratureRule;

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_RHS_DEGREE: usize = 6;

/// Element stiffness matrix `∫_T ∇N_i·∇N_j`, integrated exactly.
pub fn local_stiffness(space: &FeSpace, t: usize) -> [[f64; 6]; 6] {
    let k = space.degree();
    let rule = QuadratureRule::with_degree(2 * k - 2);
    let geo = space.mesh().geometry(t);
    let n = space.local_len();
    let mut m = [[0.0; 6]; 6];
    for (p, w) in rule.points.iter().zip(&rule.weights) {
        let basis = eval_basis(k, *p).expect("validated degree");
        let grads: Vec<[f64; 2]> = (0..n).map(|i| basis.grad(i, &geo.grad_lambda)).collect();
        for i in 0..n {
            for j in 0..n {
                m[i][j] += w * geo.area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
            }
        }
    }
    m
}

/// Stiffness matrix over every DOF, before boundary elimination.
pub fn assemble_stiffness_full(space: &FeSpace) -> SparseSpdMatrix {
    let n = space.local_len();
    let mut triplets = Vec::with_capacity(space.mesh().n_triangles() * n * n);
    for t in 0..space.mesh().n_triangles() {
        let m = local_stiffness(space, t);
        let dofs = space.element_dofs(t);
        for i in 0..n {
            for j in 0..n {
                triplets.push((dofs[i], dofs[j], m[i][j]));
            }
        }
    }
    SparseSpdMatrix::from_triplets(space.n_dofs(), triplets)
}

/// Stiffness matrix restricted to the interior DOFs.
pub fn assemble_stiffness(space: &FeSpace) -> SparseSpdMatrix {
    let n = space.local_len();
    let mut triplets = Vec::with_capacity(space.mesh().n_triangles() * n * n);
    for t in 0..space.mesh().n_triangles() {
        let m = local_stiffness(space, t);
        let dofs = space.element_dofs(t);
        for i in 0..n {
            let Some(ii) = space.interior_index(dofs[i]) else { continue };
            for j in 0..n {
                if let Some(jj) = space.interior_index(dofs[j]) {
                    triplets.push((ii, jj, m[i][j]));
                }
            }
        }
    }
    SparseSpdMatrix::from_triplets(space.n_interior(), triplets)
}

/// `∫_Ω ∇u·∇φ_j` for every interior basis function, element by element.
pub fn assemble_rhs_gradform(
    space: &FeSpace,
    u: &AnalyticFunction,
    quad_degree: usize,
) -> Result<Vec<f64>> {
    let minimum = 2 * space.degree() - 2;
    if quad_degree < minimum {
        return Err(RitzError::QuadratureDegree {
            requested: quad_degree,
            minimum,
        });
    }
    let rule = QuadratureRule::with_degree(quad_degree);
    let mesh = space.mesh();
    let mut rhs = vec![0.0; space.n_interior()];
    for t in 0..mesh.n_triangles() {
        let geo = mesh.geometry(t);
        let dofs = space.element_dofs(t);
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let gu = u.gradient(mesh.point_at(t, *p));
            let basis = eval_basis(space.degree(), *p)?;
            for (i, &dof) in dofs.iter().enumerate() {
                if let Some(ii) = space.interior_index(dof) {
                    let g = basis.grad(i, &geo.grad_lambda);
                    rhs[ii] += w * geo.area * (gu[0] * g[0] + gu[1] * g[1]);
                }
            }
        }
    }
    Ok(rhs)
}

/// Number of red refinements separating `coarse` from `fine`, after checking
/// that `fine` was produced from `coarse` by uniform refinement.
pub fn nesting_depth(coarse: &Triangulation, fine: &Triangulation) -> Result<usize> {
    if coarse.domain() != fine.domain() {
        return Err(RitzError::NotNested("meshes cover different domains".into()));
    }
    let mut m = 0;
    let mut count = coarse.n_triangles();
    while count < fine.n_triangles() {
        count *= 4;
        m += 1;
    }
    if count != fine.n_triangles() {
        return Err(RitzError::NotNested(format!(
            "{} fine elements is not 4^m times {} coarse elements",
            fine.n_triangles(),
            coarse.n_triangles()
        )));
    }
    for t in [0, fine.n_triangles() / 2, fine.n_triangles() - 1] {
        let b = coarse.barycentric(t >> (2 * m), fine.centroid(t));
        if b.iter().any(|&l| l < -1e-12) {
            return Err(RitzError::NotNested(format!(
                "fine element {t} is not inside its presumed ancestor"
            )));
        }
    }
    Ok(m)
}

/// `∫_Ω ∇f·∇φ_j` for `f` on a nested refinement of `space`'s mesh. Both
/// factors are polynomial on each fine element, so the integral is exact.
pub fn assemble_rhs_nested(space: &FeSpace, fine: &FeFunction) -> Result<Vec<f64>> {
    let coarse_mesh = space.mesh();
    let fine_space = fine.space();
    let fine_mesh = fine_space.mesh();
    let m = nesting_depth(coarse_mesh, fine_mesh)?;
    let degree = (fine_space.degree() - 1) + (space.degree() - 1);
    let rule = QuadratureRule::with_degree(degree);
    let mut rhs = vec![0.0; space.n_interior()];
    for tf in 0..fine_mesh.n_triangles() {
        let tc = tf >> (2 * m);
        let area = fine_mesh.geometry(tf).area;
        let cgeo = coarse_mesh.geometry(tc);
        let dofs = space.element_dofs(tc);
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let (_, gf) = fine.eval_local(tf, *p);
            let x = fine_mesh.point_at(tf, *p);
            let basis = eval_basis(space.degree(), coarse_mesh.barycentric(tc, x))?;
            for (i, &dof) in dofs.iter().enumerate() {
                if let Some(ii) = space.interior_index(dof) {
                    let g = basis.grad(i, &cgeo.grad_lambda);
                    rhs[ii] += w * area * (gf[0] * g[0] + gf[1] * g[1]);
                }
            }
        }
    }
    Ok(rhs)
}

/// A space together with its assembled stiffness matrix, for repeated projections.
#[derive(Debug, Clone)]
pub struct RitzProjector {
    space: Arc<FeSpace>,
    matrix: SparseSpdMatrix,
    rel_tol: f64,
}

impl RitzProjector {
    pub fn new(space: Arc<FeSpace>, rel_tol: f64) -> Self {
        let matrix = assemble_stiffness(&space);
        Self {
            space,
            matrix,
            rel_tol,
        }
    }

    pub fn space(&self) -> &Arc<FeSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &SparseSpdMatrix {
        &self.matrix
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<FeFunction> {
        let x = solve_spd(&self.matrix, rhs, self.rel_tol)?;
        FeFunction::from_interior(self.space.clone(), &x)
    }

    pub fn project(&self, u: &AnalyticFunction) -> Result<FeFunction> {
        self.project_with_degree(u, DEFAULT_RHS_DEGREE)
    }

    pub fn project_with_degree(&self, u: &AnalyticFunction, quad_degree: usize) -> Result<FeFunction> {
        let rhs = assemble_rhs_gradform(&self.space, u, quad_degree)?;
        self.solve(&rhs)
    }

    /// Projection of a finite element function living on a nested refinement.
    /// A function already in this space is returned unchanged.
    pub fn project_fe(&self, f: &FeFunction) -> Result<FeFunction> {
        if f.space().same_as(&self.space) {
            return Ok(f.clone());
        }
        let rhs = assemble_rhs_nested(&self.space, f)?;
        self.solve(&rhs)
    }
}

/// `R_h u` with the default degree-6 right-hand-side rule.
pub fn ritz_project(space: &Arc<FeSpace>, u: &AnalyticFunction, rel_tol: f64) -> Result<FeFunction> {
    RitzProjector::new(space.clone(), rel_tol).project(u)
}

/// `‖∇u‖_{L²}` by per-element quadrature of the given degree.
pub fn grad_norm_analytic(mesh: &Triangulation, u: &AnalyticFunction, degree: usize) -> f64 {
    let rule = QuadratureRule::with_degree(degree);
    let mut s = 0.0;
    for t in 0..mesh.n_triangles() {
        let area = mesh.geometry(t).area;
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let g = u.gradient(mesh.point_at(t, *p));
            s += w * area * (g[0] * g[0] + g[1] * g[1]);
        }
    }
    s.sqrt()
}

/// `‖∇f‖_{L²}` for a finite element function (exact for degree ≥ 2k − 2).
pub fn grad_norm_fe(f: &FeFunction) -> f64 {
    let mesh = f.space().mesh();
    let rule = QuadratureRule::with_degree(2 * f.space().degree() - 2);
    let mut s = 0.0;
    for t in 0..mesh.n_triangles() {
        let area = mesh.geometry(t).area;
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let (_, g) = f.eval_local(t, *p);
            s += w * area * (g[0] * g[0] + g[1] * g[1]);
        }
    }
    s.sqrt()
}

/// `‖∇(u − f)‖_{L²}` on `f`'s mesh by quadrature of the given degree.
pub fn grad_error(f: &FeFunction, u: &AnalyticFunction, degree: usize) -> f64 {
    let mesh = f.space().mesh();
    let rule = QuadratureRule::with_degree(degree);
    let mut s = 0.0;
    for t in 0..mesh.n_triangles() {
        let area = mesh.geometry(t).area;
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let (_, g) = f.eval_local(t, *p);
            let gu = u.gradient(mesh.point_at(t, *p));
            s += w * area * ((gu[0] - g[0]).powi(2) + (gu[1] - g[1]).powi(2));
        }
    }
    s.sqrt()
}
