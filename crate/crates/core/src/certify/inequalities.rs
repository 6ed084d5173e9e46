use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::galerkin::ModeSet;
use crate::spectral::{check_basic_inequality, check_kato_inequality, random_field, InequalityConstants};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub seed: u64,
    pub pairs: usize,
    pub n: f64,
    pub basic_violations: usize,
    pub kato_violations: usize,
    pub basic_max_ratio: f64,
    pub kato_max_ratio: f64,
    #[serde(rename = "K_n")]
    pub k_n: f64,
    #[serde(rename = "G_n")]
    pub g_n: f64,
}

impl InequalityReport {
    pub fn all_hold(&self) -> bool {
        self.basic_violations == 0 && self.kato_violations == 0
    }
}

/// Checks both inequalities on `pairs` random divergence-free pairs `(v, w)`
/// supported on `modes`. Pair `i` is drawn from a generator seeded with
/// `seed + i`, so the result does not depend on the thread count.
pub fn check_inequalities(
    modes: &ModeSet,
    n: f64,
    constants: InequalityConstants,
    seed: u64,
    pairs: usize,
) -> Result<InequalityReport> {
    let results: Vec<(f64, bool, f64, bool)> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let v = random_field(modes.dim(), modes.half(), &mut rng);
            let w = random_field(modes.dim(), modes.half(), &mut rng);
            let basic = check_basic_inequality(&v, &w, n, constants.k_n)?;
            let kato = check_kato_inequality(&v, &w, n, constants.g_n)?;
            Ok((basic.ratio, basic.holds, kato.ratio, kato.holds))
        })
        .collect::<Result<_>>()?;
    Ok(InequalityReport {
        seed,
        pairs,
        n,
        basic_violations: results.iter().filter(|r| !r.1).count(),
        kato_violations: results.iter().filter(|r| !r.3).count(),
        basic_max_ratio: results.iter().map(|r| r.0).fold(0.0, f64::max),
        kato_max_ratio: results.iter().map(|r| r.2).fold(0.0, f64::max),
        k_n: constants.k_n,
        g_n: constants.g_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Mode;

    #[test]
    fn deterministic_for_a_seed() {
        let g = ModeSet::build(
            3,
            &[Mode::new(&[1, 1, 0]).unwrap(), Mode::new(&[0, 1, 1]).unwrap(), Mode::new(&[1, 0, 2]).unwrap()],
        )
        .unwrap();
        let a = check_inequalities(&g, 3.0, InequalityConstants::D3_N3, 7, 20).unwrap();
        let b = check_inequalities(&g, 3.0, InequalityConstants::D3_N3, 7, 20).unwrap();
        assert_eq!(a, b);
        assert!(a.all_hold());
    }
}
