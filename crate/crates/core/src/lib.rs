//! Finite element laboratory for measuring how the Ritz projection on
//! quasiuniform triangulations of convex polygons is controlled by the
//! Hardy–Littlewood maximal function of the gradient, and how that bound
//! carries over to Lebesgue, Lorentz, Orlicz, BMO, weighted and
//! variable-exponent norms.

pub mod error;
pub mod experiments;
pub mod fem;
pub mod field;
pub mod green;
pub mod maximal;
pub mod mesh;
pub mod norms;
pub mod quadrature;
pub mod ritz;
pub mod stats;

pub use error::{Result, RitzError};
