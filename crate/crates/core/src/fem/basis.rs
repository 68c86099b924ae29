use crate::error::{RitzError, Result};

/// Lagrange shape functions on one element.
///
/// Local ordering: vertices 0..3, then (degree 2) the midpoint of the edge
/// opposite vertex `i` at slot `3 + i`.
#[derive(Debug, Clone, Copy)]
pub struct LocalBasis {
    pub len: usize,
    pub values: [f64; 6],
    /// Derivatives with respect to the three barycentric coordinates.
    pub dlambda: [[f64; 3]; 6],
}

impl LocalBasis {
    /// Gradients on the reference triangle, coordinates (ξ, η) = (λ₁, λ₂).
    pub fn ref_grads(&self) -> Vec<[f64; 2]> {
        self.dlambda[..self.len]
            .iter()
            .map(|d| [d[1] - d[0], d[2] - d[0]])
            .collect()
    }

    /// Physical gradient of shape function `i` given the element's ∇λ.
    #[inline]
    pub fn grad(&self, i: usize, grad_lambda: &[[f64; 2]; 3]) -> [f64; 2] {
        let d = &self.dlambda[i];
        [
            d[0] * grad_lambda[0][0] + d[1] * grad_lambda[1][0] + d[2] * grad_lambda[2][0],
            d[0] * grad_lambda[0][1] + d[1] * grad_lambda[1][1] + d[2] * grad_lambda[2][1],
        ]
    }
}

pub fn local_dof_count(degree: usize) -> Result<usize> {
    match degree {
        1 => Ok(3),
        2 => Ok(6),
        d => Err(RitzError::UnsupportedDegree(d)),
    }
}

pub fn eval_basis(degree: usize, bary: [f64; 3]) -> Result<LocalBasis> {
    let l = bary;
    let mut values = [0.0; 6];
    let mut dlambda = [[0.0; 3]; 6];
    match degree {
        1 => {
            for i in 0..3 {
                values[i] = l[i];
                dlambda[i][i] = 1.0;
            }
            Ok(LocalBasis {
                len: 3,
                values,
                dlambda,
            })
        }
        2 => {
            for i in 0..3 {
                values[i] = l[i] * (2.0 * l[i] - 1.0);
                dlambda[i][i] = 4.0 * l[i] - 1.0;
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                values[3 + i] = 4.0 * l[j] * l[k];
                dlambda[3 + i][j] = 4.0 * l[k];
                dlambda[3 + i][k] = 4.0 * l[j];
            }
            Ok(LocalBasis {
                len: 6,
                values,
                dlambda,
            })
        }
        d => Err(RitzError::UnsupportedDegree(d)),
    }
}

/// Barycentric coordinates of the local nodes.
pub fn local_nodes(degree: usize) -> Result<Vec<[f64; 3]>> {
    let mut nodes = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    match degree {
        1 => Ok(nodes),
        2 => {
            nodes.extend([[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]]);
            Ok(nodes)
        }
        d => Err(RitzError::UnsupportedDegree(d)),
    }
}
