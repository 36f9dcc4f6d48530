//! Dataset file format and bundled real-data fixtures.
//!
//! A dataset is a JSON object
//! `{"m": int, "k": int, "R": [int...], "w": [float...], "z": [0|1...]}`.
//! Floats are written in shortest round-trip form and parsed exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BjpcSample, CensoringScheme};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub m: usize,
    pub k: usize,
    #[serde(rename = "R")]
    pub removals: Vec<usize>,
    pub w: Vec<f64>,
    pub z: Vec<u8>,
}

impl Dataset {
    pub fn from_sample(sample: &BjpcSample) -> Self {
        let s = sample.scheme();
        Dataset {
            m: s.m(),
            k: s.k(),
            removals: s.removals().to_vec(),
            w: sample.times().to_vec(),
            z: sample.indicators().iter().map(|&b| b as u8).collect(),
        }
    }

    pub fn to_sample(&self) -> Result<BjpcSample> {
        let scheme = CensoringScheme::new(self.m, self.k, self.removals.clone())?;
        let z = self
            .z
            .iter()
            .map(|&v| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidSample(format!(
                    "indicator {other} is not 0 or 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        BjpcSample::new(scheme, self.w.clone(), z)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Parses a dataset file straight into a validated sample.
pub fn sample_from_json(text: &str) -> Result<BjpcSample> {
    Dataset::from_json(text)?.to_sample()
}

const SCHEME1: &str = include_str!("../data/scheme1.json");
const SCHEME2: &str = include_str!("../data/scheme2.json");
const AIR_CONDITIONING: &str = include_str!("../data/air_conditioning.json");

/// Air-conditioning failure times, `R = (14, 0_(8))`, `m = 24`, `k = 10`.
pub fn scheme1() -> BjpcSample {
    sample_from_json(SCHEME1).expect("bundled fixture is valid")
}

/// Air-conditioning failure times, `R = (2_(7), 0_(2))`, `m = 24`, `k = 10`.
pub fn scheme2() -> BjpcSample {
    sample_from_json(SCHEME2).expect("bundled fixture is valid")
}

pub fn scheme1_json() -> &'static str {
    SCHEME1
}

pub fn scheme2_json() -> &'static str {
    SCHEME2
}

/// Raw complete samples (hours) for the two planes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AirConditioning {
    pub unit: String,
    pub plane_7914: Vec<f64>,
    pub plane_7913: Vec<f64>,
}

pub fn air_conditioning() -> AirConditioning {
    serde_json::from_str(AIR_CONDITIONING).expect("bundled fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_match_printed_vectors() {
        let s1 = scheme1();
        assert_eq!(
            s1.times(),
            &[1.0, 4.0, 5.0, 13.0, 15.0, 16.0, 22.0, 36.0, 80.0, 97.0]
        );
        assert_eq!(
            Dataset::from_sample(&s1).z,
            vec![0, 0, 1, 1, 1, 0, 1, 1, 0, 0]
        );
        assert_eq!(s1.scheme().removals(), &[14, 0, 0, 0, 0, 0, 0, 0, 0]);
        let s2 = scheme2();
        assert_eq!(
            s2.times(),
            &[1.0, 3.0, 4.0, 5.0, 5.0, 13.0, 14.0, 31.0, 44.0, 51.0]
        );
        assert_eq!(
            Dataset::from_sample(&s2).z,
            vec![0, 1, 0, 1, 1, 1, 1, 0, 1, 0]
        );
        let raw = air_conditioning();
        assert_eq!(raw.plane_7914.len(), 24);
        assert_eq!(raw.plane_7913.len(), 24);
    }

    #[test]
    fn fixture_times_come_from_the_right_plane() {
        let raw = air_conditioning();
        for s in [scheme1(), scheme2()] {
            for (&w, &z) in s.times().iter().zip(s.indicators()) {
                let pool = if z { &raw.plane_7914 } else { &raw.plane_7913 };
                assert!(pool.contains(&w), "{w} not in the plane for z={z}");
            }
        }
    }

    #[test]
    fn rejects_bad_indicator() {
        let text = r#"{"m":5,"k":3,"R":[0,0],"w":[1,2,3],"z":[0,2,1]}"#;
        assert!(matches!(
            sample_from_json(text),
            Err(Error::InvalidSample(_))
        ));
    }
}
