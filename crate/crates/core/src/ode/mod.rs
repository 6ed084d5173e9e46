//! Explicit Dormand–Prince 5(4) integration with PI step-size control and
//! the method's fourth-order continuous extension.

mod dense;
mod dopri5;

pub use dense::{DenseOutput, DenseSegment};
pub use dopri5::{Dopri5, StepInfo};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A first-order system `y' = f(t, y)` on `R^dim`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

impl<F> OdeSystem for (usize, F)
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn dim(&self) -> usize {
        self.0
    }
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (self.1)(t, y, dy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn halved(self) -> Self {
        Tolerances {
            rtol: self.rtol / 2.0,
            atol: self.atol / 2.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegratorStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size {h:e} below minimum at t = {t}")]
    StepSizeTooSmall { t: f64, h: f64 },
    #[error("exceeded {0} steps")]
    TooManySteps(usize),
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
}

/// Integrates `sys` from `t0` to `t_end`, keeping the dense output of every
/// accepted step.
pub fn solve<S: OdeSystem>(
    sys: &S,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    tol: Tolerances,
) -> Result<(DenseOutput, IntegratorStats), OdeError> {
    let mut stepper = Dopri5::new(sys, t0, y0, t_end, tol);
    let mut dense = DenseOutput::new(sys.dim(), t0, y0);
    while stepper.t() < t_end {
        let info = stepper.step()?;
        dense.push(info.segment);
    }
    Ok((dense, stepper.stats()))
}
