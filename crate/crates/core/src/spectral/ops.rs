use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::field::{cvec_norm_sq, cvec_zeros, mode_dot, CVec};
use super::{pairwise_sum, Mode, SpectralField};
use crate::error::{Error, Result};
use crate::galerkin::ModeSet;

/// `√(Σ_k |k|^{2m} |v_k|²)` over the two-sided spectrum.
pub fn sobolev_norm(v: &SpectralField, m: f64) -> f64 {
    let terms: Vec<f64> = v
        .iter()
        .map(|(k, c)| 2.0 * k.weight(m) * cvec_norm_sq(c))
        .collect();
    pairwise_sum(&terms).sqrt()
}

/// The real inner product `⟨v|w⟩_m = Σ_k |k|^{2m} conj(v_k)·w_k`.
pub fn sobolev_inner(v: &SpectralField, w: &SpectralField, m: f64) -> f64 {
    let terms: Vec<f64> = v
        .iter()
        .filter_map(|(k, a)| {
            let b = w.get(k)?;
            let dot: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
            Some(2.0 * k.weight(m) * dot.re)
        })
        .collect();
    pairwise_sum(&terms)
}

/// Orthogonal projection of `c ∈ C^d` onto `k^⊥`: `c − (k·c) k / |k|²`.
pub fn leray_project_mode(k: &Mode, c: &[Complex64]) -> CVec {
    let kc = mode_dot(k, c);
    let k2 = k.norm_sq();
    c.iter()
        .zip(k.components())
        .map(|(ci, &ki)| ci - kc * (ki as f64 / k2))
        .collect()
}

/// `(2π)^{-d/2}`, the normalisation of the Fourier basis `e_k`.
pub fn fourier_scale(dim: usize) -> f64 {
    (2.0 * PI).powf(-(dim as f64) / 2.0)
}

/// The Euler/NS bilinear map `P(v, w) = −L(v·∂w)`, whose Fourier components
/// are `−i (2π)^{-d/2} Σ_h [v_h·(k−h)] L_k w_{k−h}`.
///
/// Evaluated by a direct double loop over the two-sided supports; only
/// canonical output modes are accumulated since the rest follow by
/// conjugation.
pub fn bilinear_map(v: &SpectralField, w: &SpectralField) -> Result<SpectralField> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: w.dim(),
        });
    }
    let dim = v.dim();
    let vf: Vec<(Mode, CVec)> = v.iter_full().collect();
    let wf: Vec<(Mode, CVec)> = w.iter_full().collect();

    let mut acc: BTreeMap<Mode, CVec> = BTreeMap::new();
    for (h, vh) in &vf {
        for (j, wj) in &wf {
            let k = h + j;
            if k.is_zero() || !k.is_canonical() {
                continue;
            }
            let s = mode_dot(j, vh);
            if s == Complex64::new(0.0, 0.0) {
                continue;
            }
            let slot = acc.entry(k).or_insert_with(|| cvec_zeros(dim));
            for (a, b) in slot.iter_mut().zip(wj) {
                *a += s * b;
            }
        }
    }

    let factor = Complex64::new(0.0, -fourier_scale(dim));
    let mut out = SpectralField::zero(dim);
    for (k, a) in acc {
        let mut p = leray_project_mode(&k, &a);
        for c in p.iter_mut() {
            *c *= factor;
        }
        if p.iter().any(|c| *c != Complex64::new(0.0, 0.0)) {
            out.set_projected(k, p);
        }
    }
    Ok(out)
}

/// Outcome of checking one of the two nonlinear inequalities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityCheck {
    pub holds: bool,
    /// Left-hand side divided by the constant-free right-hand side; the
    /// inequality holds iff this does not exceed the constant.
    pub ratio: f64,
}

impl InequalityCheck {
    fn from_ratio(ratio: f64, constant: f64) -> Self {
        InequalityCheck {
            holds: ratio <= constant,
            ratio,
        }
    }
}

/// `‖P(v,w)‖_n ≤ K_n ‖v‖_n ‖w‖_{n+1}`.
pub fn check_basic_inequality(
    v: &SpectralField,
    w: &SpectralField,
    n: f64,
    k_n: f64,
) -> Result<InequalityCheck> {
    let denom = sobolev_norm(v, n) * sobolev_norm(w, n + 1.0);
    if denom == 0.0 {
        return Ok(InequalityCheck::from_ratio(0.0, k_n));
    }
    let p = bilinear_map(v, w)?;
    Ok(InequalityCheck::from_ratio(sobolev_norm(&p, n) / denom, k_n))
}

/// `|⟨P(v,w)|w⟩_n| ≤ G_n ‖v‖_n ‖w‖_n²`.
pub fn check_kato_inequality(
    v: &SpectralField,
    w: &SpectralField,
    n: f64,
    g_n: f64,
) -> Result<InequalityCheck> {
    let wn = sobolev_norm(w, n);
    let denom = sobolev_norm(v, n) * wn * wn;
    if denom == 0.0 {
        return Ok(InequalityCheck::from_ratio(0.0, g_n));
    }
    let p = bilinear_map(v, w)?;
    Ok(InequalityCheck::from_ratio(
        sobolev_inner(&p, w, n).abs() / denom,
        g_n,
    ))
}

/// `‖(1 − E_G) v‖_m`: the Sobolev norm of the part of `v` outside `G`.
pub fn tail_norm(v: &SpectralField, modes: &ModeSet, m: f64) -> f64 {
    sobolev_norm(&v.filter(|k| !modes.contains(k)), m)
}

/// `‖v‖_p / |G|^{p−m}`, an upper bound for [`tail_norm`] when `p ≥ m`.
pub fn tail_bound(gap: f64, norm_p: f64, m: f64, p: f64) -> Result<f64> {
    if p < m {
        return Err(Error::InvalidArgument(format!(
            "tail bound needs p >= m (p = {p}, m = {m})"
        )));
    }
    Ok(norm_p / gap.powf(p - m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mode(k: &[i32]) -> Mode {
        Mode::new(k).unwrap()
    }

    fn single_pair() -> SpectralField {
        let s = (2.0 * PI).powf(1.5);
        let mut f = SpectralField::zero(3);
        f.insert(mode(&[1, 1, 0]), &[c(s), c(-s), c(0.0)]).unwrap();
        f
    }

    #[test]
    fn norm_of_single_pair() {
        // 2 · |k|^6 · |v_k|^2 = 2 · 8 · 2(2π)^3, i.e. 16 π^{3/2}
        assert_relative_eq!(
            sobolev_norm(&single_pair(), 3.0),
            16.0 * PI.powf(1.5),
            max_relative = 1e-14
        );
        assert_eq!(sobolev_norm(&SpectralField::zero(3), 3.0), 0.0);
    }

    #[test]
    fn leray_examples() {
        let p = leray_project_mode(&mode(&[0, 0, 2]), &[c(0.0), c(0.0), c(5.0)]);
        assert!(p.iter().all(|x| x.norm() == 0.0));

        let p = leray_project_mode(&mode(&[1, 1, 0]), &[c(0.0), c(0.0), c(7.0)]);
        assert_eq!(p.as_slice(), &[c(0.0), c(0.0), c(7.0)]);

        let p = leray_project_mode(&mode(&[1, 1, 0]), &[c(1.0), c(0.0), c(0.0)]);
        assert_eq!(p.as_slice(), &[c(0.5), c(-0.5), c(0.0)]);
    }

    #[test]
    fn leray_is_idempotent() {
        let k = mode(&[2, -1, 3]);
        let v = [Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5), c(-1.5)];
        let once = leray_project_mode(&k, &v);
        let twice = leray_project_mode(&k, &once);
        for (a, b) in once.iter().zip(twice.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(mode_dot(&k, &once).norm() < 1e-14);
    }

    #[test]
    fn bilinear_with_zero_is_zero() {
        let v = single_pair();
        let z = SpectralField::zero(3);
        assert!(bilinear_map(&v, &z).unwrap().is_empty());
        assert!(bilinear_map(&z, &v).unwrap().is_empty());
    }

    #[test]
    fn single_pair_self_interaction_vanishes() {
        let v = single_pair();
        let p = bilinear_map(&v, &v).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn bilinear_dimension_mismatch() {
        let v = single_pair();
        let w = SpectralField::zero(2);
        assert!(matches!(
            bilinear_map(&v, &w),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inequality_with_zero_operand() {
        let v = single_pair();
        let z = SpectralField::zero(3);
        let basic = check_basic_inequality(&z, &v, 3.0, 0.323).unwrap();
        assert!(basic.holds && basic.ratio == 0.0);
        let kato = check_kato_inequality(&v, &z, 3.0, 0.438).unwrap();
        assert!(kato.holds && kato.ratio == 0.0);
    }

    #[test]
    fn tail_bound_rejects_p_below_m() {
        assert!(tail_bound(1.0, 1.0, 3.0, 2.0).is_err());
        assert_eq!(tail_bound(2.0, 32.0, 3.0, 5.0).unwrap(), 8.0);
    }
}
