//! Versioned JSON text format for constellations.
//!
//! ```json
//! {
//!   "format": "nbdetect.constellation",
//!   "version": 1,
//!   "name": "dsm-epa:2",
//!   "n_bits": 2,
//!   "kind": "bijective",
//!   "points": [[0.7071067811865475, 0.7071067811865475], ...],
//!   "multiplicities": [1, 1, 1, 1],
//!   "layers": [[0.7071067811865475, 0.0], [0.0, 0.7071067811865475]],
//!   "mapper": [0, 1, 2, 3]
//! }
//! ```
//!
//! `mapper` lists the point index of every bit pattern (pattern index with
//! `b_0` as least significant bit) and is written for `N <= 16`. Larger
//! superposition constellations are rebuilt from `layers` when read.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{find_in, quantize, Constellation, ConstellationKind, ConstellationPoint, MAX_BITS};
use crate::{Error, Result};

pub const FORMAT_NAME: &str = "nbdetect.constellation";
pub const FORMAT_VERSION: u32 = 1;

const MAPPER_MAX_BITS: usize = 16;

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    format: String,
    version: u32,
    name: String,
    n_bits: usize,
    kind: ConstellationKind,
    points: Vec<[f64; 2]>,
    multiplicities: Vec<u64>,
    #[serde(default)]
    layers: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    mapper: Option<Vec<u32>>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl Constellation {
    pub fn to_json(&self) -> Result<String> {
        let doc = Document {
            format: FORMAT_NAME.into(),
            version: FORMAT_VERSION,
            name: self.name.clone(),
            n_bits: self.n_bits,
            kind: self.kind,
            points: self.points.iter().map(|p| pair(p.value)).collect(),
            multiplicities: self.points.iter().map(|p| p.multiplicity).collect(),
            layers: self.layers.as_ref().map(|l| l.iter().copied().map(pair).collect()),
            mapper: (self.n_bits <= MAPPER_MAX_BITS).then(|| self.mapper.clone()),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text)?;
        if doc.format != FORMAT_NAME {
            return Err(Error::Format(format!("unknown format tag {:?}", doc.format)));
        }
        if doc.version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {}", doc.version)));
        }
        if doc.n_bits == 0 || doc.n_bits > MAX_BITS {
            return Err(Error::Format(format!("n_bits {} out of range", doc.n_bits)));
        }
        if doc.points.len() != doc.multiplicities.len() {
            return Err(Error::Format("points and multiplicities differ in length".into()));
        }
        let layers: Option<Vec<Complex64>> = doc
            .layers
            .map(|l| l.into_iter().map(|[re, im]| Complex64::new(re, im)).collect());

        let c = match doc.mapper {
            Some(mapper) => {
                let points: Vec<ConstellationPoint> = doc
                    .points
                    .iter()
                    .zip(&doc.multiplicities)
                    .enumerate()
                    .map(|(index, (&[re, im], &multiplicity))| ConstellationPoint {
                        value: Complex64::new(re, im),
                        index,
                        multiplicity,
                    })
                    .collect();
                if mapper.len() != 1 << doc.n_bits {
                    return Err(Error::Format(format!(
                        "mapper has {} entries, expected {}",
                        mapper.len(),
                        1u64 << doc.n_bits
                    )));
                }
                let mut counted = vec![0u64; points.len()];
                for &idx in &mapper {
                    *counted.get_mut(idx as usize).ok_or_else(|| Error::Format(format!("mapper index {idx} out of range")))? += 1;
                }
                if counted != doc.multiplicities {
                    return Err(Error::Format("multiplicities disagree with mapper".into()));
                }
                let mut lookup = HashMap::new();
                for p in &points {
                    if find_in(&lookup, &points, p.value).is_some() {
                        return Err(Error::Format(format!("duplicate point {}", p.value)));
                    }
                    lookup.insert(quantize(p.value), p.index);
                }
                Constellation::assemble(doc.name, doc.n_bits, points, mapper, layers, lookup)?
            }
            None => {
                let layers = layers.ok_or_else(|| Error::Format("neither mapper nor layers given".into()))?;
                let c = Constellation::superposition(doc.name, layers)?;
                let same = c.points.len() == doc.points.len()
                    && c.points.iter().zip(&doc.points).all(|(p, &[re, im])| {
                        (p.value.re - re).abs() < super::POINT_TOLERANCE
                            && (p.value.im - im).abs() < super::POINT_TOLERANCE
                    });
                if !same {
                    return Err(Error::Format("points disagree with layers".into()));
                }
                c
            }
        };
        if c.kind != doc.kind {
            return Err(Error::Format("kind disagrees with mapper".into()));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::BijectiveScheme;

    #[test]
    fn roundtrip_preserves_structure() {
        for c in [
            Constellation::dsm_epa(6).unwrap(),
            Constellation::dsm_epa(18).unwrap(),
            Constellation::bijective(BijectiveScheme::Psk8),
        ] {
            let back = Constellation::from_json(&c.to_json().unwrap()).unwrap();
            assert_eq!(back.name(), c.name());
            assert_eq!(back.mapper(), c.mapper());
            assert_eq!(back.points(), c.points());
            assert_eq!(back.kind(), c.kind());
            assert_eq!(back.layers(), c.layers());
            for n in 0..c.n_bits() {
                assert_eq!(back.subset(n, 0).unwrap(), c.subset(n, 0).unwrap());
            }
        }
    }

    #[test]
    fn rejects_inconsistent_documents() {
        let text = Constellation::dsm_epa(2).unwrap().to_json().unwrap();
        let bad_version = text.replace("\"version\": 1", "\"version\": 2");
        assert!(Constellation::from_json(&bad_version).is_err());
        let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        doc["multiplicities"][0] = 2.into();
        assert!(Constellation::from_json(&doc.to_string()).is_err());
        doc["multiplicities"][0] = 1.into();
        doc["mapper"][3] = 7.into();
        assert!(Constellation::from_json(&doc.to_string()).is_err());
    }
}
