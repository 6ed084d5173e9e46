//! The integral existence criterion
//!
//! ```text
//! δ_n + ∫₀^T ε_n  <  (1/(G_n T)) exp(−∫₀^T (G_n D_n + K_n D_{n+1}))
//! ```
//!
//! which certifies existence on `[0, T]` without solving the control equation.
//! It is never sharper than the control blow-up time.

use crate::error::{Error, Result};
use crate::estimators::EstimatorBundle;
use crate::quad::adaptive_simpson;
use crate::spectral::InequalityConstants;

const QUAD_RTOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriterionOutcome {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

pub fn chernyshenko_criterion(t: f64, bundle: &EstimatorBundle, constants: InequalityConstants) -> Result<CriterionOutcome> {
    if !(t > 0.0 && t <= bundle.horizon) {
        return Err(Error::TimeOutOfRange { t, horizon: bundle.horizon });
    }
    let InequalityConstants { k_n, g_n } = constants;
    let lhs = bundle.delta_n + adaptive_simpson(|s| bundle.eps(s), 0.0, t, QUAD_RTOL);
    let growth = adaptive_simpson(|s| g_n * bundle.growth(s) + k_n * bundle.growth_next(s), 0.0, t, QUAD_RTOL);
    let rhs = (-growth).exp() / (g_n * t);
    Ok(CriterionOutcome {
        holds: lhs < rhs,
        lhs,
        rhs,
    })
}

/// Largest `T ≤ t_upper` (to within `tol`) at which the criterion holds, found
/// by bisection; `None` if it fails at every probed time.
pub fn chernyshenko_max_time(
    bundle: &EstimatorBundle,
    constants: InequalityConstants,
    t_upper: f64,
    tol: f64,
) -> Result<Option<f64>> {
    let holds = |t: f64| chernyshenko_criterion(t, bundle, constants).map(|c| c.holds);
    if holds(t_upper)? {
        return Ok(Some(t_upper));
    }
    let mut hi = t_upper;
    let mut lo = t_upper / 2.0;
    let mut halvings = 0;
    while !holds(lo)? {
        hi = lo;
        lo /= 2.0;
        halvings += 1;
        if halvings > 60 {
            return Ok(None);
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}
