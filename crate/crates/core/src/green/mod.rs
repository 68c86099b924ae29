//! Regularized Green's functions and the weighted error quantity 𝒢_h.

mod annuli;
mod delta;
mod holder;
mod phi;

use std::sync::Arc;

pub use annuli::AnnulusDecomposition;
pub use delta::{build_delta, RegularizedDelta, BUBBLE_POWER};
pub use holder::{holder_estimate, HolderSampling};
pub use phi::PhiWeight;

use crate::error::{Result, RitzError};
use crate::fem::{eval_basis, interpolate_nodal, AnalyticFunction, FeFunction, FeSpace};
use crate::field::{norm2, PiecewiseField};
use crate::maximal::{maximal_value, RadiusGrid};
use crate::mesh::{dist, refine_uniform, Point, Triangulation};
use crate::quadrature::QuadratureRule;
use crate::ritz::{nesting_depth, RitzProjector};

/// Barycentric position of the sample point used inside each working element.
pub const SAMPLE_BARY: [f64; 3] = [0.5, 0.3, 0.2];
/// Cap on the number of z samples per level.
pub const MAX_Z_SAMPLES: usize = 200;

/// One interior point per working element, deterministically subsampled to
/// at most `cap` elements.
pub fn green_sample_points(mesh: &Triangulation, cap: usize) -> Vec<Point> {
    let n = mesh.n_triangles();
    let count = n.min(cap);
    (0..count)
        .map(|i| mesh.point_at(i * n / count, SAMPLE_BARY))
        .collect()
}

/// `⟨δ_z, ∂_l v⟩` for the interior basis functions of `fine_space`, which must
/// refine the mesh carrying `delta`.
pub fn green_rhs(fine_space: &FeSpace, delta: &RegularizedDelta, l: usize) -> Result<Vec<f64>> {
    if l > 1 {
        return Err(RitzError::InvalidArgument(format!("component must be 0 or 1, got {l}")));
    }
    let coarse = delta.mesh();
    let fine = fine_space.mesh();
    let m = nesting_depth(coarse, fine)?;
    let k = fine_space.degree();
    let rule = QuadratureRule::with_degree(delta.degree() + 6 + k - 1);
    let mut rhs = vec![0.0; fine_space.n_interior()];
    let first = delta.host_element() << (2 * m);
    for t in first..first + (1 << (2 * m)) {
        let geo = fine.geometry(t);
        let dofs = fine_space.element_dofs(t);
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let x = fine.point_at(t, *p);
            let d = delta.eval(x);
            if d == 0.0 {
                continue;
            }
            let basis = eval_basis(k, *p)?;
            for (i, &dof) in dofs.iter().enumerate() {
                if let Some(ii) = fine_space.interior_index(dof) {
                    rhs[ii] += w * geo.area * d * basis.grad(i, &geo.grad_lambda)[l];
                }
            }
        }
    }
    Ok(rhs)
}

/// Galerkin solution `g_z` of `⟨∇g, ∇v⟩ = ⟨δ_z, ∂_l v⟩` on the projector's space.
pub fn solve_regularized_green(fine: &RitzProjector, delta: &RegularizedDelta, l: usize) -> Result<FeFunction> {
    fine.solve(&green_rhs(fine.space(), delta, l)?)
}

/// Sub-triangles (in barycentric coordinates) of `levels` red refinements.
fn subdivide(levels: usize) -> Vec<[[f64; 3]; 3]> {
    let mut tris = vec![[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]];
    let mid = |a: [f64; 3], b: [f64; 3]| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0];
    for _ in 0..levels {
        tris = tris
            .into_iter()
            .flat_map(|[a, b, c]| {
                let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
                [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
            })
            .collect();
    }
    tris
}

/// `∫_Ω φ_{ε,z}|f| / M[f](z)`. Elements within `3Kε` of z are split twice
/// before quadrature.
pub fn convolution_check(f: &PiecewiseField, w: &PhiWeight) -> Result<f64> {
    let mesh = f.mesh();
    let rule = QuadratureRule::with_degree(12);
    let near = subdivide(2);
    let whole = subdivide(0);
    let mut numerator = 0.0;
    for t in 0..mesh.n_triangles() {
        let geo = mesh.geometry(t);
        let close = dist(mesh.centroid(t), w.z) < 3.0 * w.k * w.epsilon + geo.diameter;
        let pieces = if close { &near } else { &whole };
        let scale = geo.area / pieces.len() as f64;
        for [a, b, c] in pieces {
            for (p, q) in rule.points.iter().zip(&rule.weights) {
                let l = [
                    p[0] * a[0] + p[1] * b[0] + p[2] * c[0],
                    p[0] * a[1] + p[1] * b[1] + p[2] * c[1],
                    p[0] * a[2] + p[1] * b[2] + p[2] * c[2],
                ];
                let x = mesh.point_at(t, l);
                numerator += q * scale * w.eval(x) * norm2(f.eval_located(t, l, x));
            }
        }
    }
    let m = maximal_value(f, w.z, &RadiusGrid::for_mesh(mesh));
    if m == 0.0 {
        if numerator == 0.0 {
            return Ok(0.0);
        }
        return Err(RitzError::InvalidArgument(format!(
            "maximal function vanishes at ({}, {}) but the weighted integral is {numerator}",
            w.z[0], w.z[1]
        )));
    }
    Ok(numerator / m)
}

/// Parameters of the weight `φ_{h,z}` used by 𝒢_h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenParams {
    pub k: f64,
    pub gamma: f64,
    pub alpha: f64,
}

impl Default for GreenParams {
    fn default() -> Self {
        Self {
            k: 4.0,
            gamma: 0.25,
            alpha: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhReport {
    /// `max_z max_x |∇(R_h g_z − g_z)(x)| / φ_{h,z}(x)`.
    pub value: f64,
    /// Per-z maxima, in the order of the sample points.
    pub per_z: Vec<f64>,
    /// The same maximum with `c₁` fixed by [`PhiWeight::reference_c1`]
    /// instead of renormalizing every `φ_{h,z}`.
    pub value_reference_c1: f64,
    /// `max_z ‖∇g_z‖_∞ · h²` with h the working mesh size.
    pub grad_g_scaled: f64,
    /// Largest moment residual of the regularized deltas.
    pub moment_residual: f64,
}

/// Estimate of 𝒢_h over the sample points `zs` (interior points of working
/// elements) and all fine-element barycentres. `fine` must be a nested
/// refinement of `working` (possibly the same space).
pub fn compute_gh(
    working: &RitzProjector,
    fine: &RitzProjector,
    params: GreenParams,
    zs: &[Point],
    l: usize,
) -> Result<GhReport> {
    Ok(compute_gh_sweep(working, fine, &[params], zs, l)?.remove(0))
}

/// [`compute_gh`] for several weight parameters sharing the Green's
/// function solves.
pub fn compute_gh_sweep(
    working: &RitzProjector,
    fine: &RitzProjector,
    params: &[GreenParams],
    zs: &[Point],
    l: usize,
) -> Result<Vec<GhReport>> {
    let wmesh = working.space().mesh();
    let fmesh = fine.space().mesh();
    let m = nesting_depth(wmesh, fmesh)?;
    let h = wmesh.mesh_size();
    let centre = [1.0 / 3.0; 3];
    let mut per_z = vec![Vec::with_capacity(zs.len()); params.len()];
    let mut reference = vec![0.0f64; params.len()];
    let reference_c1 = params
        .iter()
        .map(|p| PhiWeight::reference_c1(wmesh.domain(), p.k, p.gamma))
        .collect::<Result<Vec<_>>>()?;
    let mut grad_g: f64 = 0.0;
    let mut moment_residual: f64 = 0.0;
    let same = working.space().same_as(fine.space());
    for &z in zs {
        let delta = build_delta(wmesh.clone(), working.space().degree(), z)?;
        moment_residual = moment_residual.max(delta.moment_residual());
        let g = solve_regularized_green(fine, &delta, l)?;
        let rg = working.project_fe(&g)?;
        let phis = params
            .iter()
            .map(|p| PhiWeight::new(wmesh.domain(), h, z, p.k, p.gamma, p.alpha))
            .collect::<Result<Vec<_>>>()?;
        let mut worst = vec![0.0f64; params.len()];
        for t in 0..fmesh.n_triangles() {
            let x = fmesh.point_at(t, centre);
            let (_, gg) = g.eval_local(t, centre);
            let (_, gr) = if same {
                rg.eval_local(t, centre)
            } else {
                let tc = t >> (2 * m);
                rg.eval_local(tc, wmesh.barycentric(tc, x))
            };
            grad_g = grad_g.max(norm2(gg));
            let err = norm2([gr[0] - gg[0], gr[1] - gg[1]]);
            for (w, phi) in worst.iter_mut().zip(&phis) {
                *w = w.max(err / phi.eval(x));
            }
        }
        for (i, w) in worst.into_iter().enumerate() {
            per_z[i].push(w);
            reference[i] = reference[i].max(w * phis[i].c1 / reference_c1[i]);
        }
    }
    Ok(per_z
        .into_iter()
        .zip(reference)
        .map(|(per_z, value_reference_c1)| GhReport {
            value: per_z.iter().copied().fold(0.0, f64::max),
            per_z,
            value_reference_c1,
            grad_g_scaled: grad_g * h * h,
            moment_residual,
        })
        .collect())
}

/// One row of [`annuli_diagnostics`].
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusRow {
    pub j: usize,
    pub d_j: f64,
    /// Sampled Hölder quotient of the field on `A_j⁺⁺ ∩ Ω`.
    pub holder: f64,
    /// `holder · d_j^{2+α}`.
    pub normalized: f64,
    /// Whether the row satisfies `j ≥ 3`.
    pub in_range: bool,
}

/// Hölder quotients of `field` (typically ∇g_z) on the widened annuli; pairs
/// closer than the decomposition's h are skipped so that element-wise jumps
/// of a discrete gradient do not dominate. Annuli missing Ω are omitted.
pub fn annuli_diagnostics(
    decomp: &AnnulusDecomposition,
    field: &PiecewiseField,
    alpha: f64,
    n_pairs: usize,
    seed: u64,
) -> Result<Vec<AnnulusRow>> {
    let mut rows = Vec::new();
    for j in 0..decomp.len() {
        let mut sampling = HolderSampling::new(n_pairs, seed.wrapping_add(j as u64));
        sampling.min_separation = decomp.h;
        let region = |x: Point| decomp.contains(j, 2, x);
        let holder = match holder_estimate(field, region, alpha, &sampling) {
            Ok(v) => v,
            Err(RitzError::InvalidArgument(_)) => continue,
            Err(e) => return Err(e),
        };
        let d_j = decomp.radii[j];
        rows.push(AnnulusRow {
            j,
            d_j,
            holder,
            normalized: holder * d_j.powf(2.0 + alpha),
            in_range: j >= 3,
        });
    }
    Ok(rows)
}

/// The function whose local projection error is examined.
#[derive(Debug, Clone)]
pub enum LocalTarget {
    Analytic(AnalyticFunction),
    Fe(FeFunction),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalErrorReport {
    /// `|∇(w − R_h w)(z)|`.
    pub lhs: f64,
    /// `‖∇(w − w_h)‖_{L^∞(D)}`.
    pub grad_interp: f64,
    /// `d⁻¹ ‖w − w_h‖_{L^∞(D)}`.
    pub value_interp: f64,
    /// `d⁻² ‖w − R_h w‖_{L²(D)}`.
    pub l2_term: f64,
    pub rhs: f64,
    pub ratio: f64,
}

struct QuadSample {
    x: Point,
    weight: f64,
    grad_interp: f64,
    value_interp: f64,
    ritz_sq: f64,
}

/// Local error data of one target on one working space; `at(z, d)` evaluates
/// the estimate on `D = Ω ∩ B_d(z)`.
pub struct LocalErrorCheck {
    target: LocalTarget,
    ritz: FeFunction,
    interp: FeFunction,
    samples: Vec<QuadSample>,
}

impl LocalErrorCheck {
    /// Integrates on the target's own mesh for FE targets and on the working
    /// mesh refined twice for analytic ones.
    pub fn new(working: &RitzProjector, target: LocalTarget) -> Result<Self> {
        let space = working.space();
        let wmesh = space.mesh();
        let (ritz, interp, qmesh) = match &target {
            LocalTarget::Analytic(u) => {
                let fine = Arc::new(refine_uniform(&refine_uniform(wmesh)));
                (working.project(u)?, interpolate_nodal(space, u), fine)
            }
            LocalTarget::Fe(f) => (
                working.project_fe(f)?,
                interpolate_nodal(space, &f.as_analytic("target")),
                f.space().mesh().clone(),
            ),
        };
        let m = nesting_depth(wmesh, &qmesh)?;
        let rule = QuadratureRule::with_degree(6);
        let mut samples = Vec::with_capacity(qmesh.n_triangles() * rule.len());
        for t in 0..qmesh.n_triangles() {
            let tc = t >> (2 * m);
            let area = qmesh.geometry(t).area;
            for (p, w) in rule.points.iter().zip(&rule.weights) {
                let x = qmesh.point_at(t, *p);
                let (wv, wg) = match &target {
                    LocalTarget::Analytic(u) => (u.value(x), u.gradient(x)),
                    LocalTarget::Fe(f) => f.eval_local(t, *p),
                };
                let bc = wmesh.barycentric(tc, x);
                let (iv, ig) = interp.eval_local(tc, bc);
                let (rv, _) = ritz.eval_local(tc, bc);
                samples.push(QuadSample {
                    x,
                    weight: w * area,
                    grad_interp: norm2([wg[0] - ig[0], wg[1] - ig[1]]),
                    value_interp: (wv - iv).abs(),
                    ritz_sq: (wv - rv).powi(2),
                });
            }
        }
        Ok(Self {
            target,
            ritz,
            interp,
            samples,
        })
    }

    pub fn ritz(&self) -> &FeFunction {
        &self.ritz
    }

    pub fn interpolant(&self) -> &FeFunction {
        &self.interp
    }

    pub fn at(&self, z: Point, d: f64) -> LocalErrorReport {
        let wg = match &self.target {
            LocalTarget::Analytic(u) => u.gradient(z),
            LocalTarget::Fe(f) => f.eval(z).1,
        };
        let rg = self.ritz.eval(z).1;
        let lhs = norm2([wg[0] - rg[0], wg[1] - rg[1]]);
        let (mut gi, mut vi, mut l2) = (0.0f64, 0.0f64, 0.0);
        for s in self.samples.iter().filter(|s| dist(s.x, z) < d) {
            gi = gi.max(s.grad_interp);
            vi = vi.max(s.value_interp);
            l2 += s.weight * s.ritz_sq;
        }
        let value_interp = vi / d;
        let l2_term = l2.sqrt() / (d * d);
        let rhs = gi + value_interp + l2_term;
        LocalErrorReport {
            lhs,
            grad_interp: gi,
            value_interp,
            l2_term,
            rhs,
            ratio: if rhs > 0.0 { lhs / rhs } else { 0.0 },
        }
    }
}

#[cfg(test)]
mod tests;
