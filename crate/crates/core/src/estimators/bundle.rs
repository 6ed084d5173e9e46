use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{datum_error, diff_error_rough, ResidualEvaluator};
use crate::error::{Error, Result};
use crate::galerkin::GalerkinTrajectory;
use crate::interp::MonotoneCubic;

/// A nonnegative scalar function of time feeding the control equation.
#[derive(Clone)]
pub enum TimeFunction {
    Constant(f64),
    /// `amplitude · e^{−rate·t}`.
    Exponential { amplitude: f64, rate: f64 },
    Sampled(MonotoneCubic),
    /// Evaluated exactly on request.
    OnDemand(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl TimeFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeFunction::Constant(c) => *c,
            TimeFunction::Exponential { amplitude, rate } => amplitude * (-rate * t).exp(),
            TimeFunction::Sampled(f) => f.eval(t),
            TimeFunction::OnDemand(f) => f(t),
        }
    }
}

impl fmt::Debug for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeFunction::Constant(c) => write!(f, "Constant({c})"),
            TimeFunction::Exponential { amplitude, rate } => {
                write!(f, "Exponential({amplitude} e^(-{rate} t))")
            }
            TimeFunction::Sampled(s) => write!(f, "Sampled({} nodes)", s.nodes().len()),
            TimeFunction::OnDemand(_) => write!(f, "OnDemand"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    Rough,
    Analytic,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Exact => "exact",
            Provenance::Rough => "rough",
            Provenance::Analytic => "analytic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum EpsMode {
    Exact,
    Rough { q: f64, k_q: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum DeltaMode {
    Exact,
    Rough { p: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BundleOptions {
    pub eps: EpsMode,
    pub delta: DeltaMode,
    /// Sample nodes per unit time for the interpolated estimators.
    pub nodes_per_unit: f64,
    /// Evaluate every estimator exactly on request instead of interpolating.
    pub on_demand: bool,
}

impl Default for BundleOptions {
    fn default() -> Self {
        BundleOptions {
            eps: EpsMode::Exact,
            delta: DeltaMode::Exact,
            nodes_per_unit: 200.0,
            on_demand: false,
        }
    }
}

/// The inputs of the control equation: `δ_n` and the functions `ε_n`, `D_n`,
/// `D_{n+1}` on `[0, horizon]`.
#[derive(Clone, Debug)]
pub struct EstimatorBundle {
    pub n: f64,
    pub delta_n: f64,
    pub eps_n: TimeFunction,
    pub d_n: TimeFunction,
    pub d_np1: TimeFunction,
    pub horizon: f64,
    pub delta_provenance: Provenance,
    pub eps_provenance: Provenance,
    pub growth_provenance: Provenance,
}

impl EstimatorBundle {
    /// The bundle of the zero approximate solution: `δ_n = ‖u₀‖_n`, all
    /// functions identically zero.
    pub fn zero_approximant(n: f64, norm_u0_n: f64, horizon: f64) -> Self {
        EstimatorBundle {
            n,
            delta_n: norm_u0_n,
            eps_n: TimeFunction::Constant(0.0),
            d_n: TimeFunction::Constant(0.0),
            d_np1: TimeFunction::Constant(0.0),
            horizon,
            delta_provenance: Provenance::Analytic,
            eps_provenance: Provenance::Analytic,
            growth_provenance: Provenance::Analytic,
        }
    }

    /// `D_n e^{−νt}`, `D_{n+1} e^{−νt}`, `E_n e^{−2νt}`.
    pub fn exponential_decay(n: f64, nu: f64, d_n: f64, d_np1: f64, e_n: f64, delta_n: f64, horizon: f64) -> Self {
        EstimatorBundle {
            n,
            delta_n,
            eps_n: TimeFunction::Exponential {
                amplitude: e_n,
                rate: 2.0 * nu,
            },
            d_n: TimeFunction::Exponential {
                amplitude: d_n,
                rate: nu,
            },
            d_np1: TimeFunction::Exponential {
                amplitude: d_np1,
                rate: nu,
            },
            horizon,
            delta_provenance: Provenance::Analytic,
            eps_provenance: Provenance::Analytic,
            growth_provenance: Provenance::Analytic,
        }
    }

    pub fn eps(&self, t: f64) -> f64 {
        self.eps_n.eval(t)
    }

    pub fn growth(&self, t: f64) -> f64 {
        self.d_n.eval(t)
    }

    pub fn growth_next(&self, t: f64) -> f64 {
        self.d_np1.eval(t)
    }

    /// Replaces `ε_n` by `scale·ε_n + shift`.
    pub fn with_scaled_eps(&self, scale: f64, shift: f64) -> Self {
        let base = self.eps_n.clone();
        let mut out = self.clone();
        out.eps_n = TimeFunction::OnDemand(Arc::new(move |t| scale * base.eval(t) + shift));
        out
    }

    /// CSV `t,D_n,D_np1,eps_n` on the given grid, preceded by a `#` header
    /// line recording `δ_n` and provenance.
    pub fn to_csv(&self, times: &[f64]) -> String {
        let mut out = format!(
            "# n={} delta_n={:.17e} delta={} eps={} growth={}\nt,D_n,D_np1,eps_n\n",
            self.n, self.delta_n, self.delta_provenance, self.eps_provenance, self.growth_provenance
        );
        for &t in times {
            out.push_str(&format!(
                "{t:.17e},{:.17e},{:.17e},{:.17e}\n",
                self.growth(t),
                self.growth_next(t),
                self.eps(t)
            ));
        }
        out
    }
}

/// Uniform grid with at least `per_unit` points per unit time.
pub(crate) fn uniform_nodes(horizon: f64, per_unit: f64) -> Vec<f64> {
    let count = ((per_unit * horizon).ceil() as usize).max(2);
    (0..=count).map(|i| horizon * i as f64 / count as f64).collect()
}

/// Builds the estimator bundle of order `n` for a Galerkin trajectory.
pub fn bundle(traj: &GalerkinTrajectory, n: f64, options: &BundleOptions) -> Result<EstimatorBundle> {
    if !(options.nodes_per_unit > 0.0) {
        return Err(Error::InvalidArgument("nodes_per_unit must be positive".into()));
    }
    let problem = traj.problem();
    let modes = traj.modes();
    let datum = datum_error(
        problem.datum(),
        modes,
        n,
        match options.delta {
            DeltaMode::Exact => None,
            DeltaMode::Rough { p } => Some(p),
        },
    )?;
    let (delta_n, delta_provenance) = match options.delta {
        DeltaMode::Exact => (datum.exact, Provenance::Exact),
        DeltaMode::Rough { .. } => (datum.rough.unwrap_or(datum.exact), Provenance::Rough),
    };
    if let EpsMode::Rough { q, .. } = options.eps {
        if q < n {
            return Err(Error::InvalidArgument(format!("rough estimator needs q >= n (q = {q})")));
        }
    }
    let eps_provenance = match options.eps {
        EpsMode::Exact => Provenance::Exact,
        EpsMode::Rough { .. } => Provenance::Rough,
    };

    let shared = Arc::new(traj.clone());
    let evaluator = Arc::new(ResidualEvaluator::new(shared.clone()));
    let horizon = traj.horizon();
    let eps_at = {
        let evaluator = evaluator.clone();
        let eps = options.eps;
        move |t: f64| -> Result<f64> {
            match eps {
                EpsMode::Exact => evaluator.exact(n, t),
                EpsMode::Rough { q, k_q } => diff_error_rough(evaluator.trajectory(), n, q, k_q, t),
            }
        }
    };

    if options.on_demand {
        let clamp = move |t: f64| t.clamp(0.0, horizon);
        let g = shared.clone();
        let g1 = shared.clone();
        return Ok(EstimatorBundle {
            n,
            delta_n,
            eps_n: TimeFunction::OnDemand(Arc::new(move |t| eps_at(clamp(t)).unwrap_or(f64::NAN))),
            d_n: TimeFunction::OnDemand(Arc::new(move |t| {
                super::growth_estimator(&g, n, clamp(t)).unwrap_or(f64::NAN)
            })),
            d_np1: TimeFunction::OnDemand(Arc::new(move |t| {
                super::growth_estimator(&g1, n + 1.0, clamp(t)).unwrap_or(f64::NAN)
            })),
            horizon,
            delta_provenance,
            eps_provenance,
            growth_provenance: Provenance::Exact,
        });
    }

    let nodes = uniform_nodes(horizon, options.nodes_per_unit);
    let samples: Vec<(f64, f64, f64)> = nodes
        .par_iter()
        .map(|&t| {
            let (dn, dn1, eps_exact) = evaluator.sample(n, t)?;
            let eps = match options.eps {
                EpsMode::Exact => eps_exact,
                EpsMode::Rough { .. } => eps_at(t)?,
            };
            Ok((dn, dn1, eps))
        })
        .collect::<Result<_>>()?;
    let column = |f: fn(&(f64, f64, f64)) -> f64| samples.iter().map(f).collect::<Vec<f64>>();
    Ok(EstimatorBundle {
        n,
        delta_n,
        eps_n: TimeFunction::Sampled(MonotoneCubic::new(nodes.clone(), column(|s| s.2))?),
        d_n: TimeFunction::Sampled(MonotoneCubic::new(nodes.clone(), column(|s| s.0))?),
        d_np1: TimeFunction::Sampled(MonotoneCubic::new(nodes, column(|s| s.1))?),
        horizon,
        delta_provenance,
        eps_provenance,
        growth_provenance: Provenance::Exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_bundle_is_zero() {
        let b = EstimatorBundle::zero_approximant(3.0, 0.0, 1.0);
        for t in [0.0, 0.5, 1.0] {
            assert_eq!(b.eps(t) + b.growth(t) + b.growth_next(t), 0.0);
        }
        assert_eq!(b.delta_n, 0.0);
    }

    #[test]
    fn exponential_bundle_values() {
        let b = EstimatorBundle::exponential_decay(3.0, 2.0, 5.0, 7.0, 1.0, 0.0, 1.0);
        assert!((b.growth(0.5) - 5.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!((b.eps(0.5) - (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn scaled_eps() {
        let b = EstimatorBundle::exponential_decay(3.0, 0.0, 1.0, 1.0, 2.0, 0.0, 1.0);
        let s = b.with_scaled_eps(1.1, 0.01);
        assert!((s.eps(0.3) - 2.21).abs() < 1e-15);
    }

    #[test]
    fn grid_covers_horizon() {
        let g = uniform_nodes(2.0, 200.0);
        assert_eq!(g.len(), 401);
        assert_eq!(*g.last().unwrap(), 2.0);
    }
}
