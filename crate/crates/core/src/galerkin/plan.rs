use num_complex::Complex64;

use super::ModeSet;
use crate::spectral::{fourier_scale, Mode};

/// Precomputed triad list for evaluating
/// `p_k = −i (2π)^{-d/2} Σ_{h∈G} [γ_h·(k−h)] L_k γ_{k−h}` at a fixed list of
/// target modes, keeping only terms with `k − h ∈ G`.
///
/// Indices refer to the full layout of `G`: canonical half first, then the
/// negatives in the same order.
#[derive(Clone, Debug)]
pub struct TriadPlan {
    dim: usize,
    targets: Vec<Mode>,
    target_vecs: Vec<f64>,
    offsets: Vec<usize>,
    terms: Vec<(u32, u32)>,
    source_vecs: Vec<f64>,
    scale: f64,
}

impl TriadPlan {
    pub fn new(modes: &ModeSet, targets: &[Mode]) -> Self {
        let dim = modes.dim();
        let full = modes.full();
        let n_half = modes.half().len();
        let full_index = |k: &Mode| {
            modes
                .locate(k)
                .map(|(i, neg)| if neg { i + n_half } else { i })
        };
        let mut offsets = Vec::with_capacity(targets.len() + 1);
        let mut terms = Vec::new();
        offsets.push(0);
        for k in targets {
            for (hi, h) in full.iter().enumerate() {
                let j = k - h;
                if let Some(ji) = full_index(&j) {
                    terms.push((hi as u32, ji as u32));
                }
            }
            offsets.push(terms.len());
        }
        let source_vecs = full.iter().flat_map(|k| k.as_f64()).collect();
        let target_vecs = targets.iter().flat_map(|k| k.as_f64()).collect();
        TriadPlan {
            dim,
            targets: targets.to_vec(),
            target_vecs,
            offsets,
            terms,
            source_vecs,
            scale: fourier_scale(dim),
        }
    }

    pub fn targets(&self) -> &[Mode] {
        &self.targets
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Writes `p_k` for every target into `out` (`targets × dim`), given the
    /// full-layout coefficients `gamma_full` (`|G| × dim`).
    pub fn apply(&self, gamma_full: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim;
        debug_assert_eq!(out.len(), self.targets.len() * d);
        let mut acc = [Complex64::new(0.0, 0.0); 8];
        let mut acc_vec = vec![Complex64::new(0.0, 0.0); d];
        let acc: &mut [Complex64] = if d <= 8 { &mut acc[..d] } else { &mut acc_vec };
        let factor = Complex64::new(0.0, -self.scale);
        for (t, slot) in out.chunks_exact_mut(d).enumerate() {
            acc.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
            for &(h, j) in &self.terms[self.offsets[t]..self.offsets[t + 1]] {
                let gh = &gamma_full[h as usize * d..(h as usize + 1) * d];
                let jv = &self.source_vecs[j as usize * d..(j as usize + 1) * d];
                let mut s = Complex64::new(0.0, 0.0);
                for r in 0..d {
                    s += gh[r] * jv[r];
                }
                let gj = &gamma_full[j as usize * d..(j as usize + 1) * d];
                for r in 0..d {
                    acc[r] += s * gj[r];
                }
            }
            let k = &self.target_vecs[t * d..(t + 1) * d];
            let k2: f64 = k.iter().map(|x| x * x).sum();
            let mut kc = Complex64::new(0.0, 0.0);
            for r in 0..d {
                kc += acc[r] * k[r];
            }
            for r in 0..d {
                slot[r] = factor * (acc[r] - kc * (k[r] / k2));
            }
        }
    }
}

/// Expands canonical-half coefficients to the full layout.
pub fn expand_full(half: &[Complex64], out: &mut Vec<Complex64>) {
    out.clear();
    out.extend_from_slice(half);
    out.extend(half.iter().map(|c| c.conj()));
}
