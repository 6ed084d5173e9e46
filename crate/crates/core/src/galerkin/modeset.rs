use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::spectral::Mode;

/// A finite symmetric set of modes `G = S ∪ −S ⊂ Z^d ∖ {0}` together with
/// its residual set `dG = (G + G) ∖ (G ∪ {0})` and gap `|G| = min_{k∉G} |k|`.
///
/// Modes are stored by canonical representative, sorted; this order is the
/// canonical layout used by Galerkin states and CSV exports.
#[derive(Clone, Debug)]
pub struct ModeSet {
    dim: usize,
    half: Vec<Mode>,
    lookup: HashMap<Mode, (usize, bool)>,
    residual_half: Vec<Mode>,
    gap: f64,
}

impl ModeSet {
    /// Symmetrises `half_list`. Both `k` and `−k` appearing in the input is
    /// an error, as is the zero mode or an empty list.
    pub fn build(dim: usize, half_list: &[Mode]) -> Result<Self> {
        if half_list.is_empty() {
            return Err(Error::EmptyModeSet);
        }
        let mut half = BTreeSet::new();
        for k in half_list {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: k.dim(),
                });
            }
            if k.is_zero() {
                return Err(Error::ZeroMode);
            }
            let (c, _) = k.canonical();
            if !half.insert(c.clone()) {
                return Err(Error::DuplicateMode(c.to_string()));
            }
        }
        let half: Vec<Mode> = half.into_iter().collect();
        let mut lookup = HashMap::with_capacity(2 * half.len());
        for (i, k) in half.iter().enumerate() {
            lookup.insert(k.clone(), (i, false));
            lookup.insert(-k, (i, true));
        }

        let mut residual = BTreeSet::new();
        for p in lookup.keys() {
            for q in lookup.keys() {
                let s = p + q;
                if !s.is_zero() && s.is_canonical() && !lookup.contains_key(&s) {
                    residual.insert(s);
                }
            }
        }

        let gap = compute_gap(dim, &half, &lookup);
        Ok(ModeSet {
            dim,
            half,
            lookup,
            residual_half: residual.into_iter().collect(),
            gap,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of modes in `G` (both signs).
    pub fn len(&self) -> usize {
        2 * self.half.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half.is_empty()
    }

    /// Canonical representatives in canonical order.
    pub fn half(&self) -> &[Mode] {
        &self.half
    }

    /// All of `G`: the canonical half followed by its negatives.
    pub fn full(&self) -> Vec<Mode> {
        self.half
            .iter()
            .cloned()
            .chain(self.half.iter().map(|k| -k))
            .collect()
    }

    pub fn contains(&self, k: &Mode) -> bool {
        self.lookup.contains_key(k)
    }

    /// Position of `k` in the canonical half and whether `k` is the negative
    /// of the stored representative.
    pub fn locate(&self, k: &Mode) -> Option<(usize, bool)> {
        self.lookup.get(k).copied()
    }

    /// Canonical representatives of `dG`.
    pub fn residual_half(&self) -> &[Mode] {
        &self.residual_half
    }

    /// `|dG|`, counting both signs.
    pub fn residual_len(&self) -> usize {
        2 * self.residual_half.len()
    }

    /// `|(G + G) ∖ G|`, which differs from `|dG|` only by the zero mode.
    pub fn sumset_complement_len(&self) -> usize {
        self.residual_len() + 1
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }
}

fn compute_gap(dim: usize, half: &[Mode], lookup: &HashMap<Mode, (usize, bool)>) -> f64 {
    // (R+1, 0, ..., 0) lies outside G, and every mode outside the cube
    // [-(R+1), R+1]^d is longer than that, so the cube suffices.
    let r = half
        .iter()
        .flat_map(|k| k.components().iter().map(|c| c.abs()))
        .max()
        .unwrap_or(0)
        + 1;
    let side = (2 * r + 1) as usize;
    let total = side.pow(dim as u32);
    let mut best_sq = f64::INFINITY;
    let mut comps = vec![0i32; dim];
    for idx in 0..total {
        let mut rem = idx;
        for c in comps.iter_mut() {
            *c = (rem % side) as i32 - r;
            rem /= side;
        }
        let k = Mode::raw(&comps);
        if k.is_zero() || lookup.contains_key(&k) {
            continue;
        }
        best_sq = best_sq.min(k.norm_sq());
    }
    best_sq.sqrt()
}

/// Parses a mode list: one mode per line, `#` comments.
pub fn parse_mode_list(text: &str) -> Result<(usize, Vec<Mode>)> {
    let mut dim = None;
    let mut modes = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse {
            line: lineno + 1,
            msg,
        };
        let comps: Vec<i32> = line
            .split_whitespace()
            .map(|t| t.parse::<i32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| err(e.to_string()))?;
        match dim {
            None => dim = Some(comps.len()),
            Some(d) if d != comps.len() => {
                return Err(err(format!("expected {d} components, found {}", comps.len())))
            }
            _ => {}
        }
        if comps.len() < 2 {
            return Err(err("modes need at least two components".into()));
        }
        modes.push(Mode::new(&comps).map_err(|e| err(e.to_string()))?);
    }
    let dim = dim.ok_or(Error::EmptyModeSet)?;
    Ok((dim, modes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(k: &[i32]) -> Mode {
        Mode::new(k).unwrap()
    }

    #[test]
    fn single_pair_set() {
        let g = ModeSet::build(3, &[m(&[1, 1, 0])]).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.residual_half(), &[m(&[2, 2, 0])]);
        assert_eq!(g.residual_len(), 2);
        assert_eq!(g.gap(), 1.0);
    }

    #[test]
    fn gap_of_unit_shell() {
        let g = ModeSet::build(2, &[m(&[1, 0]), m(&[0, 1])]).unwrap();
        assert_eq!(g.gap(), 2f64.sqrt());
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(matches!(ModeSet::build(3, &[]), Err(Error::EmptyModeSet)));
        assert!(matches!(
            ModeSet::build(3, &[m(&[1, 0, 0]), m(&[-1, 0, 0])]),
            Err(Error::DuplicateMode(_))
        ));
        assert!(matches!(
            ModeSet::build(3, &[Mode::raw(&[0, 0, 0])]),
            Err(Error::ZeroMode)
        ));
    }

    #[test]
    fn residual_excludes_set_and_zero() {
        let g = ModeSet::build(3, &[m(&[1, 0, 0]), m(&[2, 0, 0]), m(&[0, 1, 1])]).unwrap();
        for k in g.residual_half() {
            assert!(!g.contains(k) && !k.is_zero());
        }
        for k in g.full() {
            assert!(g.contains(&-&k));
        }
    }

    #[test]
    fn parse_list() {
        let (d, modes) = parse_mode_list("# header\n1 0 0\n0 -1 2 # tail\n\n").unwrap();
        assert_eq!(d, 3);
        assert_eq!(modes, vec![m(&[1, 0, 0]), m(&[0, -1, 2])]);
        assert!(parse_mode_list("1 0 0\n1 0\n").is_err());
        assert!(parse_mode_list("0 0 0\n").is_err());
    }
}
