//! Numerical harness for the comparison principle: if `W' ≤ f(W, t)`,
//! `S' = f(S, t)` and `R' ≥ f(R, t)` with `W(0) ≤ S(0) ≤ R(0)`, then
//! `W ≤ S ≤ R` wherever all three exist.

use crate::error::{Error, Result};
use crate::ode::{solve, Tolerances};

pub const SANDWICH_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichReport {
    pub passed: bool,
    /// Largest `W − S` over the grid (positive means violated).
    pub max_lower_excess: f64,
    /// Largest `S − R` over the grid.
    pub max_upper_excess: f64,
    /// Grid times at which either bound is violated beyond the tolerance.
    pub violations: Vec<f64>,
}

/// Integrates `S' = f(t, S)`, `S(0) = s0` and checks `W ≤ S ≤ R` at every
/// grid point to within [`SANDWICH_TOL`].
pub fn caplygin_sandwich_test<F, L, U>(f: F, s0: f64, lower: L, upper: U, grid: &[f64]) -> Result<SandwichReport>
where
    F: Fn(f64, f64) -> f64,
    L: Fn(f64) -> f64,
    U: Fn(f64) -> f64,
{
    let t_end = grid
        .iter()
        .copied()
        .fold(f64::NAN, f64::max);
    if grid.is_empty() || grid.iter().any(|&t| !(t >= 0.0)) {
        return Err(Error::InvalidArgument("sandwich grid must be nonempty and nonnegative".into()));
    }
    let sys = (1usize, |t: f64, y: &[f64], dy: &mut [f64]| dy[0] = f(t, y[0]));
    let s_at: Box<dyn Fn(f64) -> f64> = if t_end > 0.0 {
        let (dense, _) = solve(&sys, 0.0, &[s0], t_end, Tolerances::default())?;
        Box::new(move |t| dense.eval_vec(t)[0])
    } else {
        Box::new(move |_| s0)
    };
    let mut report = SandwichReport {
        passed: true,
        max_lower_excess: f64::NEG_INFINITY,
        max_upper_excess: f64::NEG_INFINITY,
        violations: Vec::new(),
    };
    for &t in grid {
        let s = s_at(t);
        let below = lower(t) - s;
        let above = s - upper(t);
        report.max_lower_excess = report.max_lower_excess.max(below);
        report.max_upper_excess = report.max_upper_excess.max(above);
        if below > SANDWICH_TOL || above > SANDWICH_TOL {
            report.passed = false;
            report.violations.push(t);
        }
    }
    Ok(report)
}
