//! The scalar control problem
//!
//! ```text
//! dR/dt = −ν R + (G_n D_n + K_n D_{n+1}) R + G_n R² + ε_n,   R(0) = δ_n
//! ```
//!
//! whose solution bounds `‖u(t) − u_G(t)‖_n` on its interval of existence
//! `[0, Tc)`, and whose blow-up time `Tc` lower-bounds the lifespan of the
//! exact solution.

mod analytic;
mod certificate;
mod comparison;
mod criterion;
mod global;

pub use analytic::{
    analytic_exp_decay, analytic_zero_approximant, ExpDecayRejection, ExpDecaySolution, ZeroApproximantSolution,
};
pub use certificate::{Certificate, Envelope, EstimatorProvenance, Horizon, Verdict};
pub use comparison::{caplygin_sandwich_test, SandwichReport, SANDWICH_TOL};
pub use criterion::{chernyshenko_criterion, chernyshenko_max_time, CriterionOutcome};
pub use global::{
    decay_envelope, global_existence_bootstrap, global_existence_simple, BootstrapOutcome, DecayEnvelope,
    SimpleOutcome,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::EstimatorBundle;
use crate::ode::{DenseOutput, Dopri5, IntegratorStats, OdeError, OdeSystem, Tolerances};
use crate::spectral::InequalityConstants;

/// `e_ν(t) = (1 − e^{−νt})/ν`, with the limit `t` at `ν = 0`.
pub fn e_nu(nu: f64, t: f64) -> f64 {
    if t.is_infinite() {
        return if nu > 0.0 { 1.0 / nu } else { f64::INFINITY };
    }
    let x = nu * t;
    if x.abs() < 1e-6 {
        t * (1.0 - x / 2.0 + x * x / 6.0)
    } else {
        -(-x).exp_m1() / nu
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControlOptions {
    /// `R` above this value is declared a blow-up.
    pub blowup_threshold: f64,
    /// Accepted steps below `min_step_factor · T_max` are declared a blow-up.
    pub min_step_factor: f64,
    pub tolerances: Tolerances,
}

impl Default for ControlOptions {
    fn default() -> Self {
        ControlOptions {
            blowup_threshold: 1e9,
            min_step_factor: 1e-14,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ControlProblem {
    pub nu: f64,
    pub constants: InequalityConstants,
    pub bundle: EstimatorBundle,
    pub t_max: f64,
    pub options: ControlOptions,
}

impl ControlProblem {
    pub fn new(nu: f64, constants: InequalityConstants, bundle: EstimatorBundle, t_max: f64) -> Result<Self> {
        if !(nu >= 0.0) {
            return Err(Error::InvalidArgument(format!("viscosity must be >= 0, got {nu}")));
        }
        if !(t_max > 0.0) {
            return Err(Error::InvalidArgument(format!("T_max must be positive, got {t_max}")));
        }
        if t_max > bundle.horizon * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "T_max = {t_max} exceeds the estimator horizon {}",
                bundle.horizon
            )));
        }
        Ok(ControlProblem {
            nu,
            constants,
            bundle,
            t_max,
            options: ControlOptions::default(),
        })
    }

    pub fn with_options(mut self, options: ControlOptions) -> Self {
        self.options = options;
        self
    }

    /// Right-hand side of the control equation.
    pub fn rhs(&self, t: f64, r: f64) -> f64 {
        let InequalityConstants { k_n, g_n } = self.constants;
        let b = &self.bundle;
        -self.nu * r + (g_n * b.growth(t) + k_n * b.growth_next(t)) * r + g_n * r * r + b.eps(t)
    }
}

impl OdeSystem for ControlProblem {
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        dy[0] = self.rhs(t, y[0]);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupReason {
    Threshold,
    StepCollapse,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupDiagnostics {
    pub reason: BlowupReason,
    pub last_time: f64,
    pub last_step: f64,
    pub last_value: f64,
}

#[derive(Clone, Debug)]
pub struct ControlSolution {
    /// Accepted step points `(t, R(t))`.
    pub samples: Vec<(f64, f64)>,
    /// Certified existence time: the blow-up time, or `T_max` without blow-up.
    pub tc: f64,
    pub blew_up: bool,
    pub diagnostics: Option<BlowupDiagnostics>,
    pub stats: IntegratorStats,
    dense: DenseOutput,
}

impl ControlSolution {
    /// Last time covered by the numerical solution.
    pub fn t_last(&self) -> f64 {
        self.dense.t_end()
    }

    /// `R(t)` from the dense output, for `0 ≤ t ≤ t_last`.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        if !(0.0..=self.t_last()).contains(&t) {
            return None;
        }
        Some(self.dense.eval_vec(t)[0])
    }

    pub fn delta(&self) -> f64 {
        self.samples[0].1
    }
}

/// Integrates the control equation on `[0, T_max]`, stopping at blow-up.
pub fn solve_control(problem: &ControlProblem) -> Result<ControlSolution> {
    let t_max = problem.t_max;
    let delta = problem.bundle.delta_n;
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta_n must be finite and >= 0, got {delta}")));
    }
    let opts = problem.options;
    let mut stepper = Dopri5::new(problem, 0.0, &[delta], t_max, opts.tolerances)
        .with_min_step(opts.min_step_factor * t_max);
    let mut dense = DenseOutput::new(1, 0.0, &[delta]);
    let mut samples = vec![(0.0, delta)];
    let mut last_step = 0.0;

    let blowup = loop {
        if stepper.t() >= t_max {
            break None;
        }
        match stepper.step() {
            Ok(info) => {
                last_step = info.t_new - info.t_old;
                dense.push(info.segment);
                let r = stepper.y()[0];
                if !r.is_finite() {
                    return Err(OdeError::NonFinite(info.t_new).into());
                }
                samples.push((info.t_new, r));
                if r > opts.blowup_threshold {
                    break Some(BlowupReason::Threshold);
                }
            }
            Err(OdeError::StepSizeTooSmall { h, .. }) => {
                last_step = h;
                break Some(BlowupReason::StepCollapse);
            }
            Err(e) => return Err(e.into()),
        }
    };

    let stats = stepper.stats();
    match blowup {
        None => Ok(ControlSolution {
            samples,
            tc: t_max,
            blew_up: false,
            diagnostics: None,
            stats,
            dense,
        }),
        Some(reason) => {
            let &(t_b, r_b) = samples.last().unwrap();
            let tc = extrapolate_blowup(&samples).min(t_max);
            Ok(ControlSolution {
                samples,
                tc,
                blew_up: tc < t_max,
                diagnostics: Some(BlowupDiagnostics {
                    reason,
                    last_time: t_b,
                    last_step,
                    last_value: r_b,
                }),
                stats,
                dense,
            })
        }
    }
}

/// Linear extrapolation of `1/R` through the last two samples to zero; near a
/// Riccati blow-up `1/R` is asymptotically linear in `Tc − t`.
fn extrapolate_blowup(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len();
    let (t_b, r_b) = samples[n - 1];
    if n < 2 {
        return t_b;
    }
    let (t_a, r_a) = samples[n - 2];
    if !(r_a > 0.0 && r_b > r_a) {
        return t_b;
    }
    let (y_a, y_b) = (1.0 / r_a, 1.0 / r_b);
    t_b + y_b * (t_b - t_a) / (y_a - y_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_nu_values() {
        assert_eq!(e_nu(0.0, 0.5), 0.5);
        assert!((e_nu(8.0, f64::INFINITY) - 0.125).abs() < 1e-15);
        let expected = (1.0 - (-7.2f64).exp()) / 8.0;
        assert!((e_nu(8.0, 0.9) - expected).abs() < 1e-15);
        assert!((e_nu(8.0, 0.9) - 0.124907).abs() < 1e-6);
    }

    #[test]
    fn e_nu_is_continuous_in_nu() {
        for t in [0.1, 1.0, 3.0] {
            let below = e_nu(1e-7 / t, t);
            let above = e_nu(1.1e-6 / t, t);
            assert!((below - t).abs() < 1e-6 * t);
            assert!((above - t).abs() < 1e-5 * t);
        }
    }

    #[test]
    fn pure_riccati_blowup_time() {
        // dR/dt = G R², R(0) = δ blows up at 1/(G δ).
        let bundle = EstimatorBundle::zero_approximant(3.0, 2.0, 1.0);
        let p = ControlProblem::new(0.0, InequalityConstants::new(1.0, 1.0).unwrap(), bundle, 1.0).unwrap();
        let sol = solve_control(&p).unwrap();
        assert!(sol.blew_up);
        assert!((sol.tc - 0.5).abs() < 1e-8, "tc = {}", sol.tc);
        assert_eq!(sol.delta(), 2.0);
    }

    #[test]
    fn no_blowup_reaches_t_max() {
        let bundle = EstimatorBundle::zero_approximant(3.0, 1.0, 2.0);
        let p = ControlProblem::new(5.0, InequalityConstants::new(1.0, 1.0).unwrap(), bundle, 2.0).unwrap();
        let sol = solve_control(&p).unwrap();
        assert!(!sol.blew_up);
        assert_eq!(sol.tc, 2.0);
        assert!(sol.samples.iter().all(|&(_, r)| r >= 0.0));
    }

    #[test]
    fn t_max_beyond_bundle_rejected() {
        let bundle = EstimatorBundle::zero_approximant(3.0, 1.0, 1.0);
        assert!(ControlProblem::new(0.0, InequalityConstants::D3_N3, bundle, 2.0).is_err());
    }
}
