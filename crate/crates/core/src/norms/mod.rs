//! Function-space norms of sampled fields.

mod bmo;
mod lebesgue;
mod lorentz;
mod muckenhoupt;
mod orlicz;
mod samples;
mod space;
mod varexp;
mod weight;

pub use bmo::{bmo_seminorm, mean_oscillation, BMO_POLAR_RHO, BMO_POLAR_THETA};
pub use lebesgue::{distribution_function, distribution_samples, lp_norm, lp_norm_samples};
pub use lorentz::{lorentz_norm, lorentz_norm_samples};
pub use muckenhoupt::muckenhoupt_estimate;
pub use orlicz::{
    nabla2_check, nabla2_check_on, orlicz_norm, orlicz_norm_samples, simonenko_estimate,
    simonenko_indices, Nabla2Report, OrliczFunction,
};
pub use samples::{FieldSamples, NORM_QUAD_DEGREE};
pub use space::{Exponent, SpaceSpec};
pub use varexp::{varexp_norm, varexp_norm_samples, VariableExponent};
pub use weight::Weight;

/// Smallest λ with `modular(λ) ≤ 1` for a modular that is nonincreasing in λ,
/// bracketed by doubling/halving from `start` and then bisected.
pub(crate) fn bisect_modular(start: f64, modular: impl Fn(f64) -> f64) -> f64 {
    let mut hi = start;
    let mut guard = 0;
    while modular(hi) > 1.0 {
        hi *= 2.0;
        guard += 1;
        assert!(guard < 2000, "modular does not drop below one");
    }
    let mut lo = hi / 2.0;
    while modular(lo) <= 1.0 {
        hi = lo;
        lo /= 2.0;
        guard += 1;
        assert!(guard < 4000, "modular does not exceed one");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if modular(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    hi
}
