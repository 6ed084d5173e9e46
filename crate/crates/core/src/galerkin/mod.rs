//! Galerkin truncation of the Euler/NS equations on a symmetric mode set.
//!
//! The state is the list of coefficients `γ_k`, `k` in the canonical half of
//! `G`, each a complex `d`-vector, stored as interleaved `(re, im)` pairs.
//! Coefficients at `−k` are implied by conjugation.

mod modeset;
mod plan;

pub use modeset::{parse_mode_list, ModeSet};
pub use plan::{expand_full, TriadPlan};

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode::{self, DenseOutput, IntegratorStats, OdeSystem, Tolerances};
use crate::quad::adaptive_simpson;
use crate::spectral::{cvec_norm_sq, divergence_residual, Mode, SpectralField};

/// External forcing. Sampled forcing is linearly interpolated between grid
/// times and held constant outside the grid.
#[derive(Clone, Debug, Default)]
pub enum Forcing {
    #[default]
    Zero,
    Sampled {
        times: Vec<f64>,
        fields: Vec<SpectralField>,
    },
}

impl Forcing {
    pub fn sampled(times: Vec<f64>, fields: Vec<SpectralField>) -> Result<Self> {
        if times.is_empty() || times.len() != fields.len() {
            return Err(Error::InvalidArgument(
                "forcing needs one field per grid time".into(),
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "forcing grid must be strictly increasing".into(),
            ));
        }
        Ok(Forcing::Sampled { times, fields })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Forcing::Zero)
    }

    /// Interpolation weights `(i, j, w)`: `f(t) = (1−w) f_i + w f_j`.
    fn bracket(times: &[f64], t: f64) -> (usize, usize, f64) {
        let n = times.len();
        if n == 1 || t <= times[0] {
            return (0, 0, 0.0);
        }
        if t >= times[n - 1] {
            return (n - 1, n - 1, 0.0);
        }
        let j = times.partition_point(|&x| x <= t);
        let i = j - 1;
        (i, j, (t - times[i]) / (times[j] - times[i]))
    }

    /// The forcing field at time `t`, or `None` when identically zero.
    pub fn at(&self, t: f64) -> Option<SpectralField> {
        match self {
            Forcing::Zero => None,
            Forcing::Sampled { times, fields } => {
                let (i, j, w) = Self::bracket(times, t);
                if i == j {
                    return Some(fields[i].clone());
                }
                fields[i].scaled(1.0 - w).add(&fields[j].scaled(w)).ok()
            }
        }
    }

    /// `f_k(t)` on the canonical half of `modes`, flattened.
    fn on_modes(&self, modes: &ModeSet, t: f64) -> Option<Vec<Complex64>> {
        let f = self.at(t)?;
        let d = modes.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); modes.half().len() * d];
        for (slot, k) in out.chunks_exact_mut(d).zip(modes.half()) {
            if let Some(v) = f.get(k) {
                slot.copy_from_slice(&v);
            }
        }
        Some(out)
    }
}

/// The Galerkin Cauchy problem on a fixed mode set.
#[derive(Clone, Debug)]
pub struct GalerkinProblem {
    modes: Arc<ModeSet>,
    nu: f64,
    datum: SpectralField,
    forcing: Forcing,
}

impl GalerkinProblem {
    pub fn new(modes: Arc<ModeSet>, nu: f64, datum: SpectralField, forcing: Forcing) -> Result<Self> {
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(Error::InvalidArgument(format!("viscosity must be >= 0, got {nu}")));
        }
        if datum.dim() != modes.dim() {
            return Err(Error::DimensionMismatch {
                expected: modes.dim(),
                got: datum.dim(),
            });
        }
        Ok(GalerkinProblem {
            modes,
            nu,
            datum,
            forcing,
        })
    }

    pub fn modes(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn datum(&self) -> &SpectralField {
        &self.datum
    }

    pub fn forcing(&self) -> &Forcing {
        &self.forcing
    }

    /// `E_G u₀`.
    pub fn projected_datum(&self) -> SpectralField {
        self.datum.filter(|k| self.modes.contains(k))
    }

    /// Initial state in the canonical layout.
    pub fn initial_state(&self) -> Vec<Complex64> {
        let d = self.modes.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); self.modes.half().len() * d];
        for (slot, k) in out.chunks_exact_mut(d).zip(self.modes.half()) {
            if let Some(v) = self.datum.get(k) {
                slot.copy_from_slice(&v);
            }
        }
        out
    }
}

/// The Galerkin vector field as an [`OdeSystem`] on interleaved real state.
pub struct GalerkinSystem<'a> {
    problem: &'a GalerkinProblem,
    plan: TriadPlan,
    damping: Vec<f64>,
}

impl<'a> GalerkinSystem<'a> {
    pub fn new(problem: &'a GalerkinProblem) -> Self {
        let modes = problem.modes();
        let plan = TriadPlan::new(modes, modes.half());
        let damping = modes.half().iter().map(|k| problem.nu * k.norm_sq()).collect();
        GalerkinSystem {
            problem,
            plan,
            damping,
        }
    }

    /// `dγ_k/dt` for every canonical `k`, given the canonical-half state.
    pub fn rhs(&self, t: f64, state: &[Complex64]) -> Vec<Complex64> {
        let d = self.problem.modes.dim();
        let mut full = Vec::with_capacity(2 * state.len());
        expand_full(state, &mut full);
        let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
        self.plan.apply(&full, &mut out);
        for ((slot, g), nu_k2) in out
            .chunks_exact_mut(d)
            .zip(state.chunks_exact(d))
            .zip(&self.damping)
        {
            for r in 0..d {
                slot[r] -= g[r] * *nu_k2;
            }
        }
        if let Some(f) = self.problem.forcing.on_modes(&self.problem.modes, t) {
            for (o, fk) in out.iter_mut().zip(f) {
                *o += fk;
            }
        }
        out
    }
}

impl OdeSystem for GalerkinSystem<'_> {
    fn dim(&self) -> usize {
        2 * self.problem.modes.half().len() * self.problem.modes.dim()
    }

    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let state = unpack(y);
        let out = self.rhs(t, &state);
        pack(&out, dy);
    }
}

pub fn pack(state: &[Complex64], out: &mut [f64]) {
    for (c, pair) in state.iter().zip(out.chunks_exact_mut(2)) {
        pair[0] = c.re;
        pair[1] = c.im;
    }
}

pub fn unpack(y: &[f64]) -> Vec<Complex64> {
    y.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect()
}

/// Evaluates the Galerkin right-hand side for a canonical-half state.
pub fn galerkin_rhs(state: &[Complex64], t: f64, problem: &GalerkinProblem) -> Result<Vec<Complex64>> {
    let expected = problem.modes.half().len() * problem.modes.dim();
    if state.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: state.len(),
        });
    }
    Ok(GalerkinSystem::new(problem).rhs(t, state))
}

/// Integrated Galerkin solution with dense output on `[0, horizon]`.
#[derive(Clone, Debug)]
pub struct GalerkinTrajectory {
    problem: GalerkinProblem,
    horizon: f64,
    dense: DenseOutput,
    stats: IntegratorStats,
    tolerances: Tolerances,
}

/// Integrates the Galerkin system up to `horizon`.
pub fn integrate(problem: &GalerkinProblem, horizon: f64, tol: Tolerances) -> Result<GalerkinTrajectory> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    let sys = GalerkinSystem::new(problem);
    let mut y0 = vec![0.0; sys.dim()];
    pack(&problem.initial_state(), &mut y0);
    let (dense, stats) = ode::solve(&sys, 0.0, &y0, horizon, tol)?;
    Ok(GalerkinTrajectory {
        problem: problem.clone(),
        horizon,
        dense,
        stats,
        tolerances: tol,
    })
}

impl GalerkinTrajectory {
    pub fn problem(&self) -> &GalerkinProblem {
        &self.problem
    }

    pub fn modes(&self) -> &Arc<ModeSet> {
        &self.problem.modes
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn stats(&self) -> IntegratorStats {
        self.stats
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances
    }

    /// Accepted step times of the integrator.
    pub fn step_times(&self) -> Vec<f64> {
        self.dense.step_times()
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::TimeOutOfRange {
                t,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    /// Canonical-half coefficients at time `t`.
    pub fn state_at(&self, t: f64) -> Result<Vec<Complex64>> {
        self.check_time(t)?;
        Ok(unpack(&self.dense.eval_vec(t)))
    }

    /// `u_G(t)` as a field.
    pub fn snapshot(&self, t: f64) -> Result<SpectralField> {
        let state = self.state_at(t)?;
        Ok(state_to_field(self.modes(), &state))
    }

    /// `|γ_k(t)|` for any `k ∈ G`.
    pub fn coefficient_abs(&self, k: &Mode, t: f64) -> Result<f64> {
        let (i, _) = self
            .modes()
            .locate(k)
            .ok_or_else(|| Error::UnknownMode(k.to_string()))?;
        let d = self.modes().dim();
        let state = self.state_at(t)?;
        Ok(cvec_norm_sq(&state[i * d..(i + 1) * d]).sqrt())
    }

    /// `max_k |k·γ_k(t)| / max(1, |γ_k(t)|)`.
    pub fn divergence_defect(&self, t: f64) -> Result<f64> {
        let d = self.modes().dim();
        let state = self.state_at(t)?;
        Ok(self
            .modes()
            .half()
            .iter()
            .zip(state.chunks_exact(d))
            .map(|(k, g)| {
                let norm = cvec_norm_sq(g).sqrt();
                divergence_residual(k, g) * k.norm() * norm / norm.max(1.0)
            })
            .fold(0.0, f64::max))
    }

    /// `‖u_G(t)‖_{L²}`.
    pub fn l2_norm(&self, t: f64) -> Result<f64> {
        let state = self.state_at(t)?;
        Ok((2.0 * state.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt())
    }

    /// CSV with one row per time: `t`, then `re`/`im` of every component of
    /// every canonical mode in canonical order.
    pub fn to_csv(&self, times: &[f64]) -> Result<String> {
        let d = self.modes().dim();
        let mut out = String::from("t");
        for k in self.modes().half() {
            let label: Vec<String> = k.components().iter().map(|c| c.to_string()).collect();
            let label = label.join("_");
            for r in 0..d {
                out.push_str(&format!(",re_{label}_{r},im_{label}_{r}"));
            }
        }
        out.push('\n');
        for &t in times {
            let state = self.state_at(t)?;
            out.push_str(&format!("{t:.17e}"));
            for c in &state {
                out.push_str(&format!(",{:.17e},{:.17e}", c.re, c.im));
            }
            out.push('\n');
        }
        Ok(out)
    }
}

pub(crate) fn state_to_field(modes: &ModeSet, state: &[Complex64]) -> SpectralField {
    let d = modes.dim();
    let mut f = SpectralField::zero(d);
    for (k, g) in modes.half().iter().zip(state.chunks_exact(d)) {
        if g.iter().any(|c| *c != Complex64::new(0.0, 0.0)) {
            f.set_projected(k.clone(), g.iter().copied().collect());
        }
    }
    f
}

/// `(‖E_G u₀‖_{L²} + ∫₀ᵗ e^{νs} ‖E_G f(s)‖_{L²} ds) e^{−νt}`.
pub fn l2_bound(problem: &GalerkinProblem, t: f64) -> f64 {
    let u0 = crate::spectral::sobolev_norm(&problem.projected_datum(), 0.0);
    let forcing_integral = match problem.forcing() {
        Forcing::Zero => 0.0,
        forcing => adaptive_simpson(
            |s| {
                let fs = forcing
                    .at(s)
                    .map(|f| crate::spectral::sobolev_norm(&f.filter(|k| problem.modes().contains(k)), 0.0))
                    .unwrap_or(0.0);
                (problem.nu() * s).exp() * fs
            },
            0.0,
            t,
            1e-10,
        ),
    };
    (u0 + forcing_integral) * (-problem.nu() * t).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pair_problem(nu: f64) -> GalerkinProblem {
        let a = Mode::new(&[1, 1, 0]).unwrap();
        let s = (2.0 * PI).powf(1.5);
        let mut datum = SpectralField::zero(3);
        datum
            .insert(a.clone(), &[Complex64::new(s, 0.0), Complex64::new(-s, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        let modes = Arc::new(ModeSet::build(3, &[a]).unwrap());
        GalerkinProblem::new(modes, nu, datum, Forcing::Zero).unwrap()
    }

    #[test]
    fn single_pair_is_steady_for_euler() {
        let p = pair_problem(0.0);
        let rhs = galerkin_rhs(&p.initial_state(), 0.0, &p).unwrap();
        assert!(rhs.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn single_pair_decays_with_viscosity() {
        let p = pair_problem(0.5);
        let traj = integrate(&p, 1.0, Tolerances::default()).unwrap();
        let l2 = traj.l2_norm(1.0).unwrap();
        let l2_0 = traj.l2_norm(0.0).unwrap();
        // |k|^2 = 2, so the pair decays like e^{-2νt}.
        assert!((l2 / l2_0 - (-1.0f64).exp()).abs() < 1e-9);
        assert!(l2 <= l2_bound(&p, 1.0));
    }

    #[test]
    fn zero_state_gives_forcing() {
        let a = Mode::new(&[1, 1, 0]).unwrap();
        let modes = Arc::new(ModeSet::build(3, &[a.clone(), Mode::new(&[0, 0, 1]).unwrap()]).unwrap());
        let mut f = SpectralField::zero(3);
        f.insert(a.clone(), &[Complex64::new(1.0, 2.0), Complex64::new(-1.0, -2.0), Complex64::new(3.0, 0.0)])
            .unwrap();
        let outside = Mode::new(&[5, 0, 0]).unwrap();
        f.insert(outside, &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        let forcing = Forcing::sampled(vec![0.0], vec![f.clone()]).unwrap();
        let p = GalerkinProblem::new(modes.clone(), 1.0, SpectralField::zero(3), forcing).unwrap();
        let rhs = galerkin_rhs(&[Complex64::new(0.0, 0.0); 6], 0.3, &p).unwrap();
        let (ia, _) = modes.locate(&a).unwrap();
        assert_eq!(&rhs[3 * ia..3 * ia + 3], f.get(&a).unwrap().as_slice());
        let other = 1 - ia;
        assert!(rhs[3 * other..3 * other + 3].iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn rhs_rejects_wrong_length() {
        let p = pair_problem(0.0);
        assert!(galerkin_rhs(&[Complex64::new(0.0, 0.0)], 0.0, &p).is_err());
    }

    #[test]
    fn forcing_interpolates_linearly() {
        let a = Mode::new(&[0, 1]).unwrap();
        let mut f0 = SpectralField::zero(2);
        f0.insert(a.clone(), &[Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let forcing = Forcing::sampled(vec![0.0, 2.0], vec![f0.clone(), f0.scaled(3.0)]).unwrap();
        let mid = forcing.at(1.0).unwrap();
        assert_eq!(mid.get(&a).unwrap()[0], Complex64::new(4.0, 0.0));
        assert_eq!(forcing.at(5.0).unwrap().get(&a).unwrap()[0], Complex64::new(6.0, 0.0));
        assert!(Forcing::sampled(vec![1.0, 0.0], vec![f0.clone(), f0]).is_err());
    }

    #[test]
    fn trajectory_rejects_out_of_range_time() {
        let traj = integrate(&pair_problem(0.0), 0.5, Tolerances::default()).unwrap();
        assert!(matches!(traj.state_at(0.6), Err(Error::TimeOutOfRange { .. })));
        assert!(integrate(&pair_problem(0.0), 0.0, Tolerances::default()).is_err());
    }
}
