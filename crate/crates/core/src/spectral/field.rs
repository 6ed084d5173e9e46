use std::collections::BTreeMap;

use num_complex::Complex64;
use smallvec::SmallVec;

use super::Mode;
use crate::error::{Error, Result};

/// A complex `d`-vector, the Fourier coefficient of a vector field at one mode.
pub type CVec = SmallVec<[Complex64; 4]>;

/// Relative tolerance for `k · v_k = 0` on user-supplied coefficients.
pub const DIV_FREE_TOL: f64 = 1e-12;

pub fn cvec_zeros(dim: usize) -> CVec {
    SmallVec::from_elem(Complex64::new(0.0, 0.0), dim)
}

pub fn cvec_norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

pub fn cvec_conj(v: &[Complex64]) -> CVec {
    v.iter().map(|c| c.conj()).collect()
}

/// `k · c` without conjugation.
pub fn mode_dot(k: &Mode, c: &[Complex64]) -> Complex64 {
    k.components()
        .iter()
        .zip(c)
        .map(|(&ki, ci)| ci * ki as f64)
        .sum()
}

/// Relative divergence residual `|k·c| / (|k||c|)`; zero for a zero vector.
pub fn divergence_residual(k: &Mode, c: &[Complex64]) -> f64 {
    let norm = cvec_norm_sq(c).sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    mode_dot(k, c).norm() / (k.norm() * norm)
}

/// A real, zero-mean, divergence-free vector field on `T^d` with finitely many
/// nonzero Fourier coefficients.
///
/// Only the canonical member of each `±k` pair is stored; the coefficient at
/// `-k` is the complex conjugate of the one at `k`, so reality holds by
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    dim: usize,
    coeffs: BTreeMap<Mode, CVec>,
}

impl SpectralField {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 2, "fields live on T^d with d >= 2");
        SpectralField {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (canonical) modes; the two-sided support is twice this.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|v| v.iter().all(|c| *c == Complex64::new(0.0, 0.0)))
    }

    /// Inserts the coefficient of `k`. A non-canonical `k` stores the conjugate
    /// at `-k`. Rejects repeated pairs and coefficients that fail the
    /// divergence check.
    pub fn insert(&mut self, k: Mode, v: &[Complex64]) -> Result<()> {
        self.check_dims(&k, v)?;
        let residual = divergence_residual(&k, v);
        if residual > DIV_FREE_TOL {
            return Err(Error::NotDivergenceFree {
                mode: k.to_string(),
                residual,
            });
        }
        let (key, flipped) = k.canonical();
        if self.coeffs.contains_key(&key) {
            return Err(Error::DuplicateMode(key.to_string()));
        }
        let value = if flipped { cvec_conj(v) } else { CVec::from_slice(v) };
        self.coeffs.insert(key, value);
        Ok(())
    }

    /// Stores a coefficient already known to be orthogonal to `k` (e.g. the
    /// output of a Leray projection). Overwrites.
    pub(crate) fn set_projected(&mut self, k: Mode, v: CVec) {
        debug_assert_eq!(k.dim(), self.dim);
        let (key, flipped) = k.canonical();
        let value = if flipped { cvec_conj(&v) } else { v };
        self.coeffs.insert(key, value);
    }

    fn check_dims(&self, k: &Mode, v: &[Complex64]) -> Result<()> {
        if k.is_zero() {
            return Err(Error::ZeroMode);
        }
        if k.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: k.dim(),
            });
        }
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Coefficient at any mode, canonical or not.
    pub fn get(&self, k: &Mode) -> Option<CVec> {
        let (key, flipped) = k.canonical();
        self.coeffs
            .get(&key)
            .map(|v| if flipped { cvec_conj(v) } else { v.clone() })
    }

    /// Stored canonical entries in mode order.
    pub fn iter(&self) -> impl Iterator<Item = (&Mode, &CVec)> {
        self.coeffs.iter()
    }

    /// Both members of every stored pair: `(k, v_k)` then `(-k, conj v_k)`.
    pub fn iter_full(&self) -> impl Iterator<Item = (Mode, CVec)> + '_ {
        self.coeffs
            .iter()
            .flat_map(|(k, v)| [(k.clone(), v.clone()), (-k, cvec_conj(v))])
    }

    pub fn modes(&self) -> impl Iterator<Item = &Mode> {
        self.coeffs.keys()
    }

    /// Largest relative divergence residual over stored modes.
    pub fn max_divergence_residual(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, v)| divergence_residual(k, v))
            .fold(0.0, f64::max)
    }

    /// Multiplies every coefficient by a real scalar.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            for c in v.iter_mut() {
                *c *= factor;
            }
        }
        out
    }

    /// Pointwise sum of two fields of equal dimension.
    pub fn add(&self, other: &SpectralField) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            let slot = out.coeffs.entry(k.clone()).or_insert_with(|| cvec_zeros(self.dim));
            for (a, b) in slot.iter_mut().zip(v) {
                *a += b;
            }
        }
        Ok(out)
    }

    /// Keeps only modes for which `keep` returns true.
    pub fn filter(&self, mut keep: impl FnMut(&Mode) -> bool) -> Self {
        SpectralField {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reality_is_structural() {
        let mut f = SpectralField::zero(3);
        let k = Mode::new(&[0, -1, 1]).unwrap();
        f.insert(k.clone(), &[c(1.0, 2.0), c(0.0, 1.0), c(0.0, 1.0)]).unwrap();
        let at_k = f.get(&k).unwrap();
        let at_minus = f.get(&-&k).unwrap();
        for (a, b) in at_k.iter().zip(at_minus.iter()) {
            assert_eq!(*a, b.conj());
        }
        assert_eq!(f.len(), 1);
        assert_eq!(f.iter_full().count(), 2);
    }

    #[test]
    fn rejects_compressible_coefficient() {
        let mut f = SpectralField::zero(3);
        let k = Mode::new(&[1, 0, 0]).unwrap();
        let err = f.insert(k, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(err, Err(Error::NotDivergenceFree { .. })));
    }

    #[test]
    fn rejects_duplicate_pair() {
        let mut f = SpectralField::zero(3);
        let k = Mode::new(&[1, 1, 0]).unwrap();
        let v = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)];
        f.insert(k.clone(), &v).unwrap();
        assert!(matches!(f.insert(-&k, &v), Err(Error::DuplicateMode(_))));
    }

    #[test]
    fn rejects_wrong_dimension() {
        let mut f = SpectralField::zero(3);
        let k = Mode::new(&[1, 1]).unwrap();
        assert!(matches!(
            f.insert(k, &[c(1.0, 0.0), c(-1.0, 0.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
