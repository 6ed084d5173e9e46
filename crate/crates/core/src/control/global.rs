//! Global-existence tests and the decay envelope past the bootstrap time.

use super::{e_nu, ControlSolution};
use crate::error::{Error, Result};
use crate::estimators::EstimatorBundle;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimpleOutcome {
    pub global: bool,
    /// `G_n ‖u₀‖_n`, the viscosity above which existence is global.
    pub threshold: f64,
}

/// `ν ≥ G_n ‖u₀‖_n` implies global existence without any integration.
pub fn global_existence_simple(nu: f64, g_n: f64, norm_u0_n: f64) -> SimpleOutcome {
    let threshold = g_n * norm_u0_n;
    SimpleOutcome {
        global: nu > 0.0 && nu >= threshold,
        threshold,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BootstrapOutcome {
    pub global: bool,
    /// First time with `D_n + R_n ≤ ν/G_n`.
    pub t1: Option<f64>,
    /// `ν/G_n`.
    pub threshold: f64,
    /// `D_n(t₁) + R_n(t₁)`.
    pub amplitude: Option<f64>,
}

/// Scans `D_n + R_n` against `ν/G_n` on a uniform grid over the computed part
/// of the control solution and refines the first crossing by bisection.
pub fn global_existence_bootstrap(
    solution: &ControlSolution,
    bundle: &EstimatorBundle,
    nu: f64,
    g_n: f64,
    scan_points: usize,
) -> BootstrapOutcome {
    let threshold = nu / g_n;
    let none = BootstrapOutcome {
        global: false,
        t1: None,
        threshold,
        amplitude: None,
    };
    if nu <= 0.0 {
        return none;
    }
    let t_end = solution.t_last();
    let bound = |t: f64| bundle.growth(t) + solution.value_at(t).unwrap_or(f64::INFINITY);
    let scan_points = scan_points.max(1);
    let mut prev = 0.0;
    for i in 0..=scan_points {
        let t = t_end * i as f64 / scan_points as f64;
        if bound(t) <= threshold {
            let t1 = if i == 0 { 0.0 } else { bisect(prev, t, |s| bound(s) <= threshold) };
            return BootstrapOutcome {
                global: true,
                t1: Some(t1),
                threshold,
                amplitude: Some(bound(t1)),
            };
        }
        prev = t;
    }
    none
}

/// Smallest point in `(lo, hi]` where `pred` holds, given `pred(hi)` and `!pred(lo)`.
fn bisect(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    while hi - lo > 1e-12 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `‖u(t)‖_n ≤ A e^{−ν(t−t₁)} / (1 − G_n A e_ν(t−t₁))` for `t ≥ t₁`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayEnvelope {
    pub t1: f64,
    pub amplitude: f64,
    pub nu: f64,
    pub g_n: f64,
}

impl DecayEnvelope {
    /// Whether the denominator stays positive for all `t ≥ t₁`.
    pub fn is_global(&self) -> bool {
        self.g_n * self.amplitude * e_nu(self.nu, f64::INFINITY) < 1.0
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t < self.t1 {
            return Err(Error::InvalidArgument(format!(
                "envelope starts at t1 = {}, requested t = {t}",
                self.t1
            )));
        }
        let s = t - self.t1;
        let denom = 1.0 - self.g_n * self.amplitude * e_nu(self.nu, s);
        if denom <= 0.0 {
            return Err(Error::InvalidArgument(format!("envelope denominator vanishes before t = {t}")));
        }
        Ok(self.amplitude * (-self.nu * s).exp() / denom)
    }
}

pub fn decay_envelope(t1: f64, amplitude: f64, nu: f64, g_n: f64) -> DecayEnvelope {
    DecayEnvelope {
        t1,
        amplitude,
        nu,
        g_n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{solve_control, ControlProblem};
    use crate::spectral::InequalityConstants;

    #[test]
    fn simple_criterion_threshold() {
        let s = global_existence_simple(68.0, 0.438, 154.3);
        assert!(s.global);
        assert!((s.threshold - 67.5834).abs() < 1e-4);
        assert!(!global_existence_simple(67.0, 0.438, 154.3).global);
        assert!(!global_existence_simple(0.0, 0.438, 0.0).global);
    }

    #[test]
    fn envelope_decays_and_rejects_early_times() {
        let e = decay_envelope(0.9, 0.0614, 8.0, 0.438);
        assert!(e.is_global());
        assert!((e.eval(0.9).unwrap() - 0.0614).abs() < 1e-15);
        assert!(e.eval(1.5).unwrap() < 0.0614 * (-8.0f64 * 0.6).exp() * 1.01);
        assert!(e.eval(0.5).is_err());
        let bad = decay_envelope(0.0, 100.0, 1.0, 1.0);
        assert!(!bad.is_global());
        assert!(bad.eval(1.0).is_err());
    }

    #[test]
    fn bootstrap_on_zero_approximant() {
        // R(0) = 1 is already below ν/G = 2.
        let bundle = EstimatorBundle::zero_approximant(3.0, 1.0, 1.0);
        let g = InequalityConstants::new(1.0, 1.0).unwrap();
        let p = ControlProblem::new(2.0, g, bundle.clone(), 1.0).unwrap();
        let sol = solve_control(&p).unwrap();
        let b = global_existence_bootstrap(&sol, &bundle, 2.0, 1.0, 100);
        assert!(b.global);
        assert_eq!(b.t1, Some(0.0));
        let none = global_existence_bootstrap(&sol, &bundle, 0.0, 1.0, 100);
        assert!(!none.global);
    }

    #[test]
    fn bootstrap_refines_crossing() {
        // δ = ε = 0 keeps R ≡ 0, so the crossing is 3 e^{−t} = 1.
        let mut bundle = EstimatorBundle::exponential_decay(3.0, 1.0, 3.0, 3.0, 0.0, 0.0, 2.0);
        bundle.d_np1 = crate::estimators::TimeFunction::Constant(0.0);
        let g = InequalityConstants::new(1e-9, 1.0).unwrap();
        let p = ControlProblem::new(1.0, g, bundle.clone(), 2.0).unwrap();
        let sol = solve_control(&p).unwrap();
        let b = global_existence_bootstrap(&sol, &bundle, 1.0, 1.0, 50);
        assert!((b.t1.unwrap() - 3.0f64.ln()).abs() < 1e-9);
    }
}
