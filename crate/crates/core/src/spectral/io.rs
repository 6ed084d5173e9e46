//! Plain-text field literals.
//!
//! One record per stored mode: `k1 ... kd  re1 im1 ... red imd`, whitespace
//! separated, one canonical representative per `±k` pair. `#` starts a
//! comment.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{Mode, SpectralField};
use crate::error::{Error, Result};

pub fn parse_field(text: &str) -> Result<SpectralField> {
    let mut field: Option<SpectralField> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |msg: String| Error::Parse {
            line: lineno + 1,
            msg,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if !tokens.len().is_multiple_of(3) || tokens.len() < 6 {
            return Err(parse_err(format!(
                "expected 3d tokens (d >= 2), found {}",
                tokens.len()
            )));
        }
        let dim = tokens.len() / 3;
        let k: Vec<i32> = tokens[..dim]
            .iter()
            .map(|t| t.parse::<i32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(e.to_string()))?;
        let nums: Vec<f64> = tokens[dim..]
            .iter()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(e.to_string()))?;
        let v: Vec<Complex64> = nums
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        let f = field.get_or_insert_with(|| SpectralField::zero(dim));
        if f.dim() != dim {
            return Err(parse_err(format!("dimension {dim} differs from {}", f.dim())));
        }
        let mode = Mode::new(&k).map_err(|e| parse_err(e.to_string()))?;
        f.insert(mode, &v).map_err(|e| parse_err(e.to_string()))?;
    }
    field.ok_or(Error::Parse {
        line: 0,
        msg: "no field records".into(),
    })
}

pub fn write_field(field: &SpectralField) -> String {
    let mut out = String::new();
    for (k, v) in field.iter() {
        for c in k.components() {
            let _ = write!(out, "{c} ");
        }
        for z in v {
            let _ = write!(out, " {:e} {:e}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_negative_modes() {
        let text = "# datum\n-1 -1 0  1 0 -1 0 0 0  # stored as conj at (1,1,0)\n\n0 0 1 0 2 1 0 0 0\n";
        let f = parse_field(text).unwrap();
        assert_eq!(f.len(), 2);
        let v = f.get(&Mode::new(&[1, 1, 0]).unwrap()).unwrap();
        assert_eq!(v[0], Complex64::new(1.0, 0.0));
        let w = f.get(&Mode::new(&[0, 0, 1]).unwrap()).unwrap();
        assert_eq!(w[0], Complex64::new(0.0, 2.0));
    }

    #[test]
    fn rejects_bad_records() {
        assert!(matches!(parse_field("1 0 0 1 0"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_field("0 0 0 0 0 0 0 0 0").is_err());
        assert!(parse_field("1 0 0 1 0 0 0 0 0").is_err());
        assert!(parse_field("# nothing\n").is_err());
    }

    #[test]
    fn write_then_parse_is_identity() {
        let text = "1 -1 0 1 0.5 1 0.5 0 0\n0 0 2 1 0 0 -1 0 0\n";
        let f = parse_field(text).unwrap();
        assert_eq!(parse_field(&write_field(&f)).unwrap(), f);
    }
}
