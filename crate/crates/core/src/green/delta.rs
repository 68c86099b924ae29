use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, RitzError};
use crate::mesh::{Point, Triangulation};
use crate::quadrature::QuadratureRule;

/// Barycentric coordinates closer than this to zero count as "on an edge".
const EDGE_TOL: f64 = 1e-10;

/// `δ_z = (λ₀λ₁λ₂)²·q` on a host element, with `q ∈ P_k` fixed by
/// `∫_T δ_z P = P(z)` for every `P ∈ P_k`.
#[derive(Debug, Clone)]
pub struct RegularizedDelta {
    mesh: Arc<Triangulation>,
    host: usize,
    z: Point,
    degree: usize,
    /// Exponents `(a, b)` of the monomials `λ₁^a λ₂^b` spanning P_k.
    exponents: Vec<(usize, usize)>,
    coefficients: Vec<f64>,
}

pub const BUBBLE_POWER: i32 = 2;

fn monomials(k: usize) -> Vec<(usize, usize)> {
    (0..=k).flat_map(|d| (0..=d).map(move |a| (a, d - a))).collect()
}

fn monomial(e: (usize, usize), l: [f64; 3]) -> f64 {
    l[1].powi(e.0 as i32) * l[2].powi(e.1 as i32)
}

fn bubble(l: [f64; 3]) -> f64 {
    (l[0] * l[1] * l[2]).powi(BUBBLE_POWER)
}

/// Builds `δ_z` on the element of `mesh` containing `z`.
pub fn build_delta(mesh: Arc<Triangulation>, degree: usize, z: Point) -> Result<RegularizedDelta> {
    let (host, bary) = mesh.locate_point(z).ok_or(RitzError::PointOutside(z[0], z[1]))?;
    if bary.iter().any(|&l| l < EDGE_TOL) {
        return Err(RitzError::PointOnElementBoundary(z[0], z[1]));
    }
    let exponents = monomials(degree);
    let n = exponents.len();
    let rule = QuadratureRule::with_degree(2 * degree + 6);
    let area = mesh.geometry(host).area;
    let mut gram = DMatrix::zeros(n, n);
    for (p, w) in rule.points.iter().zip(&rule.weights) {
        let b = bubble(*p);
        let values: Vec<f64> = exponents.iter().map(|&e| monomial(e, *p)).collect();
        for i in 0..n {
            for j in 0..n {
                gram[(i, j)] += w * area * b * values[i] * values[j];
            }
        }
    }
    let rhs = DVector::from_iterator(n, exponents.iter().map(|&e| monomial(e, bary)));
    let coefficients = gram
        .cholesky()
        .ok_or_else(|| RitzError::InvalidMesh(format!("degenerate moment system on element {host}")))?
        .solve(&rhs);
    Ok(RegularizedDelta {
        mesh,
        host,
        z,
        degree,
        exponents,
        coefficients: coefficients.iter().copied().collect(),
    })
}

impl RegularizedDelta {
    pub fn mesh(&self) -> &Arc<Triangulation> {
        &self.mesh
    }

    pub fn host_element(&self) -> usize {
        self.host
    }

    pub fn z(&self) -> Point {
        self.z
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Value at barycentric coordinates of the host element.
    pub fn eval_bary(&self, l: [f64; 3]) -> f64 {
        if l.iter().any(|&x| x <= 0.0) {
            return 0.0;
        }
        let q: f64 = self
            .exponents
            .iter()
            .zip(&self.coefficients)
            .map(|(&e, c)| c * monomial(e, l))
            .sum();
        bubble(l) * q
    }

    pub fn eval(&self, x: Point) -> f64 {
        self.eval_bary(self.mesh.barycentric(self.host, x))
    }

    /// `δ_z` with the opposite sign.
    pub fn negated(&self) -> Self {
        let mut d = self.clone();
        d.coefficients.iter_mut().for_each(|c| *c = -*c);
        d
    }

    /// Largest `|∫_T δ_z P − P(z)|` over the monomials `x₁^a x₂^b`, `a + b ≤ k`,
    /// with monomials centred at the element centroid.
    pub fn moment_residual(&self) -> f64 {
        let rule = QuadratureRule::with_degree(2 * self.degree + 6);
        let area = self.mesh.geometry(self.host).area;
        let c = self.mesh.centroid(self.host);
        let scale = self.mesh.geometry(self.host).diameter;
        let mut worst: f64 = 0.0;
        for (a, b) in monomials(self.degree) {
            let p = |x: Point| ((x[0] - c[0]) / scale).powi(a as i32) * ((x[1] - c[1]) / scale).powi(b as i32);
            let integral: f64 = rule
                .points
                .iter()
                .zip(&rule.weights)
                .map(|(l, w)| w * area * self.eval_bary(*l) * p(self.mesh.point_at(self.host, *l)))
                .sum();
            worst = worst.max((integral - p(self.z)).abs());
        }
        worst
    }

    /// Raw moment `∫_T δ_z P` for a physical polynomial `P`.
    pub fn moment(&self, p: impl Fn(Point) -> f64) -> f64 {
        let rule = QuadratureRule::with_degree(2 * self.degree + 6);
        let area = self.mesh.geometry(self.host).area;
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(|(l, w)| w * area * self.eval_bary(*l) * p(self.mesh.point_at(self.host, *l)))
            .sum()
    }

    /// Largest absolute value on a barycentric lattice with 60 subdivisions.
    pub fn sup_norm(&self) -> f64 {
        const N: usize = 60;
        let mut m: f64 = 0.0;
        for i in 0..=N {
            for j in 0..=N - i {
                let l = [i as f64 / N as f64, j as f64 / N as f64, (N - i - j) as f64 / N as f64];
                m = m.max(self.eval_bary(l).abs());
            }
        }
        m
    }
}
