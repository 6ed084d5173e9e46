//! Fourier-side representation of divergence-free vector fields on `T^d`.
//!
//! Fields are expanded on `e_k(x) = (2π)^{-d/2} e^{i k·x}`, so the `L²` norm
//! is the plain `ℓ²` norm of the coefficients.

mod field;
pub mod io;
mod mode;
mod ops;

pub use field::{
    cvec_conj, cvec_norm_sq, cvec_zeros, divergence_residual, mode_dot, CVec, SpectralField,
    DIV_FREE_TOL,
};
pub use mode::Mode;
pub use ops::{
    bilinear_map, check_basic_inequality, check_kato_inequality, fourier_scale,
    leray_project_mode, sobolev_inner, sobolev_norm, tail_bound, tail_norm, InequalityCheck,
};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the basic inequality (`K_n`) and the Kato inequality (`G_n`)
/// for a fixed dimension and Sobolev order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityConstants {
    pub k_n: f64,
    pub g_n: f64,
}

impl InequalityConstants {
    /// Values for `d = 3`, `n = 3`.
    pub const D3_N3: InequalityConstants = InequalityConstants {
        k_n: 0.323,
        g_n: 0.438,
    };

    pub fn new(k_n: f64, g_n: f64) -> Result<Self> {
        if !(k_n > 0.0 && k_n.is_finite() && g_n > 0.0 && g_n.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "inequality constants must be positive (K_n = {k_n}, G_n = {g_n})"
            )));
        }
        Ok(InequalityConstants { k_n, g_n })
    }
}

/// A Sobolev exponent.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SobolevOrder(pub f64);

impl SobolevOrder {
    pub fn value(self) -> f64 {
        self.0
    }

    /// `n > d/2 + 1`, the range where the Kato inequality and the control
    /// theory apply.
    pub fn is_admissible(self, dim: usize) -> bool {
        self.0.is_finite() && self.0 > dim as f64 / 2.0 + 1.0
    }
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        return xs.iter().fold(0.0, |acc, x| acc + x);
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// A random divergence-free field on the given canonical modes: each
/// coefficient is drawn uniformly from `[-1, 1]^{2d}` and Leray projected.
pub fn random_field<R: Rng + ?Sized>(dim: usize, half_modes: &[Mode], rng: &mut R) -> SpectralField {
    let mut field = SpectralField::zero(dim);
    for k in half_modes {
        let raw: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
            .collect();
        field.set_projected(k.clone(), leray_project_mode(k, &raw));
    }
    field
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let xs: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 5050.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn admissible_orders() {
        assert!(SobolevOrder(3.0).is_admissible(3));
        assert!(!SobolevOrder(2.5).is_admissible(3));
        assert!(SobolevOrder(2.5).is_admissible(2));
    }

    #[test]
    fn constants_must_be_positive() {
        assert!(InequalityConstants::new(0.0, 1.0).is_err());
        assert!(InequalityConstants::new(0.323, 0.438).is_ok());
    }
}
