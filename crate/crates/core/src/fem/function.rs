use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::error::{RitzError, Result};
use crate::fem::analytic::AnalyticFunction;
use crate::fem::basis::eval_basis;
use crate::fem::space::FeSpace;
use crate::mesh::Point;

/// A member of V_h: coefficients over all DOFs, zero on boundary DOFs.
#[derive(Debug, Clone)]
pub struct FeFunction {
    space: Arc<FeSpace>,
    coefficients: Vec<f64>,
}

impl FeFunction {
    pub fn zero(space: Arc<FeSpace>) -> Self {
        let n = space.n_dofs();
        Self {
            space,
            coefficients: vec![0.0; n],
        }
    }

    /// Takes a full coefficient vector; boundary entries are forced to zero.
    pub fn from_coefficients(space: Arc<FeSpace>, mut coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != space.n_dofs() {
            return Err(RitzError::InvalidArgument(format!(
                "{} coefficients for {} DOFs",
                coefficients.len(),
                space.n_dofs()
            )));
        }
        for (c, &inside) in coefficients.iter_mut().zip(space.interior_dof_mask()) {
            if !inside {
                *c = 0.0;
            }
        }
        Ok(Self {
            space,
            coefficients,
        })
    }

    /// Builds a function from the values of the interior unknowns.
    pub fn from_interior(space: Arc<FeSpace>, values: &[f64]) -> Result<Self> {
        if values.len() != space.n_interior() {
            return Err(RitzError::InvalidArgument(format!(
                "{} interior values for {} interior DOFs",
                values.len(),
                space.n_interior()
            )));
        }
        let mut coefficients = vec![0.0; space.n_dofs()];
        for (dof, c) in coefficients.iter_mut().enumerate() {
            if let Some(i) = space.interior_index(dof) {
                *c = values[i];
            }
        }
        Ok(Self {
            space,
            coefficients,
        })
    }

    pub fn space(&self) -> &Arc<FeSpace> {
        &self.space
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn interior_values(&self) -> Vec<f64> {
        self.space
            .interior_dofs()
            .into_iter()
            .map(|d| self.coefficients[d])
            .collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            space: self.space.clone(),
            coefficients: self.coefficients.iter().map(|v| c * v).collect(),
        }
    }

    /// Value and gradient on element `t` at barycentric point `bary`.
    pub fn eval_local(&self, t: usize, bary: [f64; 3]) -> (f64, [f64; 2]) {
        let basis = eval_basis(self.space.degree(), bary).expect("degree validated by FeSpace");
        let gl = &self.space.mesh().geometry(t).grad_lambda;
        let mut value = 0.0;
        let mut grad = [0.0; 2];
        for (i, &dof) in self.space.element_dofs(t).iter().enumerate() {
            let c = self.coefficients[dof];
            if c == 0.0 {
                continue;
            }
            value += c * basis.values[i];
            let g = basis.grad(i, gl);
            grad[0] += c * g[0];
            grad[1] += c * g[1];
        }
        (value, grad)
    }

    /// Value and gradient at `x`; zero outside the domain.
    pub fn eval(&self, x: Point) -> (f64, [f64; 2]) {
        match self.space.mesh().locate_point(x) {
            Some((t, bary)) => self.eval_local(t, bary),
            None => (0.0, [0.0, 0.0]),
        }
    }

    /// Closed-form view of this function (value and gradient via location).
    pub fn as_analytic(&self, name: &str) -> AnalyticFunction {
        let (f, g) = (self.clone(), self.clone());
        AnalyticFunction::new(name, move |x| f.eval(x).0, move |x| g.eval(x).1, true)
    }

    /// `FEFUN <degree> <n_dofs>` followed by one coefficient per line.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "FEFUN {} {}", self.space.degree(), self.coefficients.len())?;
        for c in &self.coefficients {
            writeln!(out, "{c:.16e}")?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(input: R, space: Arc<FeSpace>) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or(RitzError::Parse {
            line: 1,
            message: "empty input".into(),
        })??;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let (degree, n): (usize, usize) = match parts.as_slice() {
            ["FEFUN", d, n] => (
                d.parse().map_err(|_| parse_err(1, "bad degree"))?,
                n.parse().map_err(|_| parse_err(1, "bad DOF count"))?,
            ),
            _ => return Err(parse_err(1, "expected FEFUN header")),
        };
        if degree != space.degree() || n != space.n_dofs() {
            return Err(parse_err(
                1,
                &format!(
                    "file holds degree {degree} with {n} DOFs, space has degree {} with {} DOFs",
                    space.degree(),
                    space.n_dofs()
                ),
            ));
        }
        let mut coefficients = Vec::with_capacity(n);
        for (i, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            coefficients.push(line.parse().map_err(|_| parse_err(i + 2, "bad coefficient"))?);
        }
        Self::from_coefficients(space, coefficients)
    }
}

fn parse_err(line: usize, message: &str) -> RitzError {
    RitzError::Parse {
        line,
        message: message.to_string(),
    }
}

/// Nodal interpolant into V_h: values at interior DOFs, zero on the boundary.
pub fn interpolate_nodal(space: &Arc<FeSpace>, u: &AnalyticFunction) -> FeFunction {
    let coefficients = space
        .dof_coordinates()
        .iter()
        .zip(space.interior_dof_mask())
        .map(|(x, &inside)| if inside { u.value(*x) } else { 0.0 })
        .collect();
    FeFunction {
        space: space.clone(),
        coefficients,
    }
}
