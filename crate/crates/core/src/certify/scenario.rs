use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{bnw_datum, bnw_modes};
use crate::control::ControlOptions;
use crate::error::{Error, Result};
use crate::estimators::BundleOptions;
use crate::galerkin::{parse_mode_list, ModeSet};
use crate::ode::Tolerances;
use crate::spectral::io::parse_field;
use crate::spectral::{InequalityConstants, Mode, SpectralField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InlineCoefficient {
    pub k: Vec<i32>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DatumSpec {
    Bnw,
    File { path: PathBuf },
    Inline { coefficients: Vec<InlineCoefficient> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ModeSpec {
    Bnw,
    File { path: PathBuf },
    Inline { modes: Vec<Vec<i32>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControlSettings {
    /// Defaults to the scenario horizon.
    pub t_max: Option<f64>,
    #[serde(flatten)]
    pub options: ControlOptions,
    /// Uniform scan points for the bootstrap global-existence test.
    pub bootstrap_scan_points: usize,
}

impl Default for ControlSettings {
    fn default() -> Self {
        ControlSettings {
            t_max: None,
            options: ControlOptions::default(),
            bootstrap_scan_points: 1000,
        }
    }
}

/// A certification run, read from JSON. Only `nu` is required.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Scenario {
    pub name: Option<String>,
    pub dim: usize,
    pub n: f64,
    pub nu: f64,
    pub constants: InequalityConstants,
    pub datum: DatumSpec,
    pub modes: ModeSpec,
    pub horizon: f64,
    pub estimators: BundleOptions,
    pub control: ControlSettings,
    pub galerkin_tolerances: Tolerances,
    pub output_dir: Option<PathBuf>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            name: None,
            dim: 3,
            n: 3.0,
            nu: f64::NAN,
            constants: InequalityConstants::D3_N3,
            datum: DatumSpec::Bnw,
            modes: ModeSpec::Bnw,
            horizon: 1.0,
            estimators: BundleOptions::default(),
            control: ControlSettings::default(),
            galerkin_tolerances: Tolerances::default(),
            output_dir: None,
        }
    }
}

impl Scenario {
    /// The bnw datum on the bnw mode set.
    pub fn bnw(nu: f64, horizon: f64) -> Self {
        Scenario {
            name: Some(format!("bnw-nu{nu}")),
            nu,
            horizon,
            ..Scenario::default()
        }
    }

    /// Parses a scenario and resolves relative paths against `base`.
    pub fn from_json(text: &str, base: &Path) -> Result<Self> {
        let mut s: Scenario = serde_json::from_str(text)?;
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let DatumSpec::File { path } = &mut s.datum {
            resolve(path);
        }
        if let ModeSpec::File { path } = &mut s.modes {
            resolve(path);
        }
        if let Some(out) = &mut s.output_dir {
            resolve(out);
        }
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidArgument(msg));
        if self.dim < 2 {
            return invalid(format!("dim must be >= 2, got {}", self.dim));
        }
        if !(self.n > self.dim as f64 / 2.0 + 1.0) {
            return invalid(format!("n = {} must exceed dim/2 + 1 = {}", self.n, self.dim as f64 / 2.0 + 1.0));
        }
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return invalid(format!("nu must be a finite number >= 0, got {}", self.nu));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return invalid(format!("horizon must be positive, got {}", self.horizon));
        }
        if let Some(t) = self.control.t_max {
            if !(t > 0.0 && t <= self.horizon) {
                return invalid(format!("control.t_max = {t} must lie in (0, horizon]"));
            }
        }
        InequalityConstants::new(self.constants.k_n, self.constants.g_n)?;
        Ok(())
    }

    pub fn t_max(&self) -> f64 {
        self.control.t_max.unwrap_or(self.horizon)
    }

    pub fn load_modes(&self) -> Result<ModeSet> {
        let set = match &self.modes {
            ModeSpec::Bnw => bnw_modes(),
            ModeSpec::File { path } => {
                let (dim, modes) = parse_mode_list(&std::fs::read_to_string(path)?)?;
                ModeSet::build(dim, &modes)?
            }
            ModeSpec::Inline { modes } => {
                let modes = modes.iter().map(|k| Mode::new(k)).collect::<Result<Vec<_>>>()?;
                ModeSet::build(self.dim, &modes)?
            }
        };
        if set.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: set.dim(),
            });
        }
        Ok(set)
    }

    pub fn load_datum(&self) -> Result<SpectralField> {
        let field = match &self.datum {
            DatumSpec::Bnw => bnw_datum(),
            DatumSpec::File { path } => parse_field(&std::fs::read_to_string(path)?)?,
            DatumSpec::Inline { coefficients } => {
                let mut f = SpectralField::zero(self.dim);
                for c in coefficients {
                    if c.re.len() != self.dim || c.im.len() != self.dim {
                        return Err(Error::DimensionMismatch {
                            expected: self.dim,
                            got: c.re.len().max(c.im.len()),
                        });
                    }
                    let v: Vec<Complex64> = c.re.iter().zip(&c.im).map(|(&r, &i)| Complex64::new(r, i)).collect();
                    f.insert(Mode::new(&c.k)?, &v)?;
                }
                f
            }
        };
        if field.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: field.dim(),
            });
        }
        Ok(field)
    }
}
