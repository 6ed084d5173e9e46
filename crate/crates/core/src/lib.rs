//! Spectral a-posteriori certification for the incompressible Euler and
//! Navier–Stokes equations on the flat torus `T^d`.
//!
//! The pipeline has four layers:
//!
//! - [`spectral`]: divergence-free fields stored on a half-spectrum, Sobolev
//!   norms, the Leray projection and the quadratic Euler/NS nonlinearity.
//! - [`galerkin`]: symmetric mode sets, the truncated ODE system and its
//!   dense-output integration.
//! - [`estimators`]: growth and error estimators of a Galerkin trajectory.
//! - [`control`]: the scalar Riccati control problem whose solution bounds the
//!   distance between the exact and approximate solutions, blow-up detection,
//!   closed-form special cases and global-existence criteria.
//!
//! [`certify`] glues these together into scenarios, certificates and CSV
//! output; the `certify` binary exposes them on the command line.

// `!(x > 0.0)` rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod control;
pub mod error;
pub mod estimators;
pub mod galerkin;
pub mod interp;
pub mod ode;
pub mod quad;
pub mod spectral;

pub use error::{Error, Result};
