use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::estimators::Provenance;
use crate::ode::Tolerances;

/// A certified existence time: finite, or `"inf"` in JSON.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Horizon {
    Finite(f64),
    Infinite,
}

impl Horizon {
    pub fn from_f64(t: f64) -> Self {
        if t.is_infinite() {
            Horizon::Infinite
        } else {
            Horizon::Finite(t)
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Horizon::Finite(t) => t,
            Horizon::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Finite(t) => write!(f, "{t}"),
            Horizon::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Horizon {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Horizon::Finite(t) => s.serialize_f64(*t),
            Horizon::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Horizon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct HorizonVisitor;
        impl Visitor<'_> for HorizonVisitor {
            type Value = Horizon;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Horizon, E> {
                Ok(Horizon::Finite(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Horizon, E> {
                Ok(Horizon::Finite(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Horizon, E> {
                Ok(Horizon::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Horizon, E> {
                match v {
                    "inf" => Ok(Horizon::Infinite),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(HorizonVisitor)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedGlobal,
    #[serde(rename = "certified-up-to-Tc")]
    CertifiedUpToTc,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::CertifiedGlobal => 0,
            Verdict::CertifiedUpToTc => 10,
            Verdict::Inconclusive => 20,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedGlobal => "certified-global",
            Verdict::CertifiedUpToTc => "certified-up-to-Tc",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub t1: f64,
    #[serde(rename = "A")]
    pub amplitude: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorProvenance {
    pub delta: Provenance,
    pub eps: Provenance,
    pub growth: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub nu: f64,
    pub n: f64,
    #[serde(rename = "K_n")]
    pub k_n: f64,
    #[serde(rename = "G_n")]
    pub g_n: f64,
    pub delta_n: f64,
    #[serde(rename = "Tc")]
    pub tc: Horizon,
    pub horizon: f64,
    pub blew_up: bool,
    pub verdict: Verdict,
    pub t1: Option<f64>,
    pub envelope: Option<Envelope>,
    pub simple_threshold: f64,
    pub estimators: Option<EstimatorProvenance>,
    pub samples_csv_path: Option<String>,
    pub tool_version: String,
    pub tolerances: Tolerances,
    pub mode_set_checksum: String,
    pub timestamp: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_json_round_trip() {
        let inf = serde_json::to_string(&Horizon::Infinite).unwrap();
        assert_eq!(inf, "\"inf\"");
        assert_eq!(serde_json::from_str::<Horizon>(&inf).unwrap(), Horizon::Infinite);
        let fin = serde_json::to_string(&Horizon::Finite(0.25)).unwrap();
        assert_eq!(serde_json::from_str::<Horizon>(&fin).unwrap(), Horizon::Finite(0.25));
        assert!(serde_json::from_str::<Horizon>("\"never\"").is_err());
    }

    #[test]
    fn verdict_codes() {
        assert_eq!(Verdict::CertifiedGlobal.exit_code(), 0);
        assert_eq!(Verdict::CertifiedUpToTc.exit_code(), 10);
        assert_eq!(Verdict::Inconclusive.exit_code(), 20);
        assert_eq!(serde_json::to_string(&Verdict::CertifiedUpToTc).unwrap(), "\"certified-up-to-Tc\"");
    }
}
