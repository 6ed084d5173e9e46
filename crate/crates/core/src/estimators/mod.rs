//! Growth and error estimators of a Galerkin trajectory.
//!
//! For a Galerkin solution `u_G` these are
//!
//! - `D_m(t) = ‖u_G(t)‖_m` (growth, `m = n, n+1`),
//! - `δ_n = ‖(1 − E_G) u₀‖_n` (datum error),
//! - `ε_n(t) = ‖(1 − E_G) P(u_G, u_G)‖_n + ‖(1 − E_G) f‖_n` (differential error),
//!
//! each available in an exact Fourier form and a cheaper upper bound built
//! from the gap of the mode set.

mod bundle;

pub use bundle::{
    bundle, BundleOptions, DeltaMode, EpsMode, EstimatorBundle, Provenance, TimeFunction,
};

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::galerkin::{expand_full, GalerkinTrajectory, ModeSet, TriadPlan};
use crate::spectral::{cvec_norm_sq, pairwise_sum, sobolev_norm, tail_bound, tail_norm, SpectralField};

/// `D_m(t) = ‖u_G(t)‖_m`.
pub fn growth_estimator(traj: &GalerkinTrajectory, m: f64, t: f64) -> Result<f64> {
    let state = traj.state_at(t)?;
    Ok(state_norm(traj.modes(), &state, m))
}

fn state_norm(modes: &ModeSet, state: &[Complex64], m: f64) -> f64 {
    let d = modes.dim();
    let terms: Vec<f64> = modes
        .half()
        .iter()
        .zip(state.chunks_exact(d))
        .map(|(k, g)| 2.0 * k.weight(m) * cvec_norm_sq(g))
        .collect();
    pairwise_sum(&terms).sqrt()
}

/// Datum error of the Galerkin projection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DatumError {
    /// `‖(1 − E_G) u₀‖_n`.
    pub exact: f64,
    /// `‖u₀‖_p / |G|^{p−n}`, when a `p` was supplied.
    pub rough: Option<f64>,
}

pub fn datum_error(datum: &SpectralField, modes: &ModeSet, n: f64, p: Option<f64>) -> Result<DatumError> {
    let exact = tail_norm(datum, modes, n);
    let rough = p
        .map(|p| tail_bound(modes.gap(), sobolev_norm(datum, p), n, p))
        .transpose()?;
    Ok(DatumError { exact, rough })
}

/// Evaluates `‖(1 − E_G) P(u_G, u_G)‖_n` over the residual set `dG` with a
/// precomputed triad plan.
#[derive(Clone, Debug)]
pub struct ResidualEvaluator {
    traj: Arc<GalerkinTrajectory>,
    plan: TriadPlan,
}

impl ResidualEvaluator {
    pub fn new(traj: Arc<GalerkinTrajectory>) -> Self {
        let plan = TriadPlan::new(traj.modes(), traj.modes().residual_half());
        ResidualEvaluator { traj, plan }
    }

    pub fn trajectory(&self) -> &Arc<GalerkinTrajectory> {
        &self.traj
    }

    /// `p_k` for every canonical `k ∈ dG`, flattened.
    pub fn residual_coefficients(&self, state: &[Complex64]) -> Vec<Complex64> {
        let d = self.traj.modes().dim();
        let mut full = Vec::with_capacity(2 * state.len());
        expand_full(state, &mut full);
        let mut out = vec![Complex64::new(0.0, 0.0); self.plan.targets().len() * d];
        self.plan.apply(&full, &mut out);
        out
    }

    fn residual_norm(&self, state: &[Complex64], n: f64) -> f64 {
        let d = self.traj.modes().dim();
        let p = self.residual_coefficients(state);
        let terms: Vec<f64> = self
            .plan
            .targets()
            .iter()
            .zip(p.chunks_exact(d))
            .map(|(k, pk)| 2.0 * k.weight(n) * cvec_norm_sq(pk))
            .collect();
        pairwise_sum(&terms).sqrt()
    }

    /// `ε_n(t)` in exact form, including the forcing tail when present.
    pub fn exact(&self, n: f64, t: f64) -> Result<f64> {
        let state = self.traj.state_at(t)?;
        Ok(self.residual_norm(&state, n) + forcing_tail(&self.traj, n, t))
    }

    /// `D_n`, `D_{n+1}` and exact `ε_n` from one state evaluation.
    pub fn sample(&self, n: f64, t: f64) -> Result<(f64, f64, f64)> {
        let state = self.traj.state_at(t)?;
        let modes = self.traj.modes();
        Ok((
            state_norm(modes, &state, n),
            state_norm(modes, &state, n + 1.0),
            self.residual_norm(&state, n) + forcing_tail(&self.traj, n, t),
        ))
    }
}

fn forcing_tail(traj: &GalerkinTrajectory, n: f64, t: f64) -> f64 {
    traj.problem()
        .forcing()
        .at(t)
        .map_or(0.0, |f| tail_norm(&f, traj.modes(), n))
}

/// Exact `ε_n(t)`; builds a fresh plan on every call, so prefer
/// [`ResidualEvaluator`] for repeated evaluation.
pub fn diff_error_exact(traj: &GalerkinTrajectory, n: f64, t: f64) -> Result<f64> {
    ResidualEvaluator::new(Arc::new(traj.clone())).exact(n, t)
}

/// `(K_q / |G|^{q−n}) ‖u_G‖_q ‖u_G‖_{q+1}` (plus the exact forcing tail).
pub fn diff_error_rough(traj: &GalerkinTrajectory, n: f64, q: f64, k_q: f64, t: f64) -> Result<f64> {
    if q < n {
        return Err(Error::InvalidArgument(format!(
            "rough estimator needs q >= n (q = {q}, n = {n})"
        )));
    }
    let state = traj.state_at(t)?;
    let modes = traj.modes();
    let bound = k_q / modes.gap().powf(q - n) * state_norm(modes, &state, q) * state_norm(modes, &state, q + 1.0);
    Ok(bound + forcing_tail(traj, n, t))
}
