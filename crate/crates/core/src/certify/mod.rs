//! Scenarios, the end-to-end certification pipeline, certificates and CSV
//! output.

mod inequalities;
mod run;
mod scenario;

pub use inequalities::{check_inequalities, InequalityReport};
pub use run::{
    emit_figure_data, figure_grid, figures_from_run_dir, run_batch, run_scenario, write_run, FigureFiles,
    RunOutcome, FIGURE_POINTS,
};
pub use scenario::{ControlSettings, DatumSpec, InlineCoefficient, ModeSpec, Scenario};

use std::f64::consts::PI;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::galerkin::{parse_mode_list, ModeSet};
use crate::spectral::{Mode, SpectralField};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Canonical half of the 150-mode set used with the bnw datum.
pub const BNW_MODES: &str = include_str!("../../data/bnw_modes.txt");

pub fn bnw_modes() -> ModeSet {
    let (dim, modes) = parse_mode_list(BNW_MODES).expect("bundled mode list parses");
    ModeSet::build(dim, &modes).expect("bundled mode list is a valid set")
}

/// `u₀ = (2π)^{3/2} Σ_{±a,±b,±c}` with `a = (1,1,0)`, `b = (1,0,1)`,
/// `c = (0,1,1)` and real coefficients `(1,−1,0)`, `(1,0,−1)`, `(0,1,−1)`.
pub fn bnw_datum() -> SpectralField {
    let s = (2.0 * PI).powf(1.5);
    let mut u0 = SpectralField::zero(3);
    for (k, v) in [
        ([1, 1, 0], [1.0, -1.0, 0.0]),
        ([1, 0, 1], [1.0, 0.0, -1.0]),
        ([0, 1, 1], [0.0, 1.0, -1.0]),
    ] {
        let coeffs: Vec<Complex64> = v.iter().map(|&x| Complex64::new(s * x, 0.0)).collect();
        u0.insert(Mode::new(&k).unwrap(), &coeffs).unwrap();
    }
    u0
}

/// SHA-256 of the sorted canonical half list, one `k1 k2 ...` line per mode.
pub fn mode_set_checksum(modes: &ModeSet) -> String {
    let mut hasher = Sha256::new();
    for k in modes.half() {
        let line: Vec<String> = k.components().iter().map(|c| c.to_string()).collect();
        hasher.update(line.join(" ").as_bytes());
        hasher.update(b"\n");
    }
    format!("{:x}", hasher.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::sobolev_norm;

    #[test]
    fn bnw_set_sizes() {
        let g = bnw_modes();
        assert_eq!(g.len(), 150);
        assert_eq!(g.gap(), 1.0);
    }

    #[test]
    fn bnw_datum_is_in_set_and_has_closed_form_norms() {
        let g = bnw_modes();
        let u0 = bnw_datum();
        assert!(u0.modes().all(|k| g.contains(k)));
        for m in 1..=5 {
            let exact = (3.0 * PI.powi(3) * 2f64.powi(m + 5)).sqrt();
            let got = sobolev_norm(&u0, m as f64);
            assert!((got - exact).abs() <= 1e-12 * exact);
        }
    }

    #[test]
    fn checksum_is_stable_hex() {
        let c = mode_set_checksum(&bnw_modes());
        assert_eq!(c.len(), 64);
        assert_eq!(c, mode_set_checksum(&bnw_modes()));
    }
}
