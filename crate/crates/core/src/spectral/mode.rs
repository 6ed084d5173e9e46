use std::fmt;
use std::ops::{Add, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A nonzero wave vector `k ∈ Z^d`.
///
/// Ordering is lexicographic on the components, which gives every container
/// keyed by modes a deterministic iteration order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode(SmallVec<[i32; 4]>);

impl Mode {
    pub fn new(components: &[i32]) -> Result<Self> {
        if components.iter().all(|&c| c == 0) {
            return Err(Error::ZeroMode);
        }
        Ok(Mode(SmallVec::from_slice(components)))
    }

    /// Builds a vector that may be zero; used for intermediate sums.
    pub(crate) fn raw(components: &[i32]) -> Self {
        Mode(SmallVec::from_slice(components))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|&c| (c as f64) * (c as f64)).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `|k|^(2m)`, the Sobolev weight of this mode.
    pub fn weight(&self, m: f64) -> f64 {
        self.norm_sq().powf(m)
    }

    /// True when the first nonzero component is positive. Exactly one of
    /// `k`, `-k` is canonical.
    pub fn is_canonical(&self) -> bool {
        self.0.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }

    /// Returns the canonical representative of `±k` and whether `k` was
    /// flipped to reach it.
    pub fn canonical(&self) -> (Mode, bool) {
        if self.is_canonical() {
            (self.clone(), false)
        } else {
            (-self, true)
        }
    }

    pub fn as_f64(&self) -> SmallVec<[f64; 4]> {
        self.0.iter().map(|&c| c as f64).collect()
    }
}

impl Neg for &Mode {
    type Output = Mode;
    fn neg(self) -> Mode {
        Mode(self.0.iter().map(|c| -c).collect())
    }
}

impl Neg for Mode {
    type Output = Mode;
    fn neg(self) -> Mode {
        -&self
    }
}

impl Add for &Mode {
    type Output = Mode;
    fn add(self, rhs: &Mode) -> Mode {
        debug_assert_eq!(self.dim(), rhs.dim());
        Mode(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Mode {
    type Output = Mode;
    fn sub(self, rhs: &Mode) -> Mode {
        debug_assert_eq!(self.dim(), rhs.dim());
        Mode(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rejected() {
        assert!(matches!(Mode::new(&[0, 0, 0]), Err(Error::ZeroMode)));
    }

    #[test]
    fn exactly_one_of_pair_is_canonical() {
        for k in [[1, 0, 0], [0, -1, 2], [-3, 4, 0], [0, 0, -1]] {
            let m = Mode::new(&k).unwrap();
            assert_ne!(m.is_canonical(), (-&m).is_canonical());
            let (c, flipped) = m.canonical();
            assert!(c.is_canonical());
            assert_eq!(flipped, !m.is_canonical());
        }
    }

    #[test]
    fn weight_is_norm_power() {
        let k = Mode::new(&[1, 1, 0]).unwrap();
        assert_eq!(k.weight(3.0), 8.0);
        assert_eq!(k.weight(0.0), 1.0);
    }
}
