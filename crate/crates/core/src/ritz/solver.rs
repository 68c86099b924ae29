use crate::error::{RitzError, Result};
use crate::ritz::sparse::SparseSpdMatrix;

/// Outcome of a conjugate-gradient solve.
#[derive(Debug, Clone)]
pub struct CgReport {
    pub iterations: usize,
    /// ‖b − Ax‖₂ / ‖b‖₂ recomputed from the returned iterate.
    pub relative_residual: f64,
    /// Smallest eigenvalue of the Lanczos tridiagonal built from the CG
    /// coefficients (of the Jacobi-scaled operator); positive for SPD input.
    pub min_ritz_value: f64,
}

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
pub fn solve_spd(a: &SparseSpdMatrix, b: &[f64], rel_tol: f64) -> Result<Vec<f64>> {
    conjugate_gradient(a, b, rel_tol).map(|(x, _)| x)
}

pub fn conjugate_gradient(
    a: &SparseSpdMatrix,
    b: &[f64],
    rel_tol: f64,
) -> Result<(Vec<f64>, CgReport)> {
    if !(rel_tol > 0.0) {
        return Err(RitzError::InvalidArgument(format!(
            "relative tolerance must be positive, got {rel_tol}"
        )));
    }
    let n = a.dim();
    if b.len() != n {
        return Err(RitzError::InvalidArgument(format!(
            "right-hand side has length {} for a {n}x{n} matrix",
            b.len()
        )));
    }
    let b_norm = norm(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok((
            x,
            CgReport {
                iterations: 0,
                relative_residual: 0.0,
                min_ritz_value: f64::NAN,
            },
        ));
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let target = rel_tol * b_norm;
    let max_iter = 10 * n.max(1);

    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut alphas = Vec::new();
    let mut betas = Vec::new();

    let mut iterations = 0;
    loop {
        if norm(&r) <= target {
            // recurrence residual drifts; confirm with the true residual
            let true_res = residual_norm(a, &x, b);
            if true_res <= target {
                break;
            }
            r = b.iter().zip(a.mul_vec(&x)).map(|(b, ax)| b - ax).collect();
            z = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
            p.clone_from(&z);
            rz = dot(&r, &z);
        }
        if iterations >= max_iter {
            return Err(RitzError::NonConvergence {
                iterations,
                residual: residual_norm(a, &x, b) / b_norm,
            });
        }
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(RitzError::NonConvergence {
                iterations,
                residual: residual_norm(a, &x, b) / b_norm,
            });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        rz = rz_new;
        alphas.push(alpha);
        betas.push(beta);
        iterations += 1;
    }

    let relative_residual = residual_norm(a, &x, b) / b_norm;
    Ok((
        x,
        CgReport {
            iterations,
            relative_residual,
            min_ritz_value: min_ritz_value(&alphas, &betas),
        },
    ))
}

fn min_ritz_value(alphas: &[f64], betas: &[f64]) -> f64 {
    let m = alphas.len();
    if m == 0 {
        return f64::NAN;
    }
    let mut t = nalgebra::DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        t[(j, j)] = 1.0 / alphas[j] + if j > 0 { betas[j - 1] / alphas[j - 1] } else { 0.0 };
        if j + 1 < m {
            let off = betas[j].sqrt() / alphas[j];
            t[(j, j + 1)] = off;
            t[(j + 1, j)] = off;
        }
    }
    t.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Dense Cholesky solve, intended for cross-checking small systems.
pub fn solve_dense(a: &SparseSpdMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let chol = a.to_dense().cholesky().ok_or_else(|| {
        RitzError::InvalidArgument("matrix is not symmetric positive definite".into())
    })?;
    let x = chol.solve(&nalgebra::DVector::from_column_slice(b));
    Ok(x.iter().copied().collect())
}

fn residual_norm(a: &SparseSpdMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    ax.iter()
        .zip(b)
        .map(|(ax, b)| (b - ax).powi(2))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
