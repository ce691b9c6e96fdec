//! JSON forms of cones and fans: `{"dim": n, "generators": [[..], ..]}` and
//! `{"dim": n, "cones": [{"id": .., "generators": [[..], ..]}, ..]}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::QVec;

use super::{validate_fan, Cone, Fan, FanCone};

#[derive(Serialize, Deserialize)]
struct ConeJson {
    dim: usize,
    generators: Vec<QVec>,
}

#[derive(Serialize, Deserialize)]
struct FanConeJson {
    id: String,
    generators: Vec<QVec>,
}

#[derive(Serialize, Deserialize)]
struct FanJson {
    dim: usize,
    cones: Vec<FanConeJson>,
}

impl Serialize for Cone {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ConeJson {
            dim: self.ambient_dim(),
            generators: self.generators().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = ConeJson::deserialize(d)?;
        Cone::from_generators(raw.dim, &raw.generators).map_err(D::Error::custom)
    }
}

impl Serialize for Fan {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FanJson {
            dim: self.ambient_dim(),
            cones: self
                .cones()
                .iter()
                .map(|fc| FanConeJson {
                    id: fc.id.clone(),
                    generators: fc.cone.generators().to_vec(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// Unvalidated fan input, so that callers can report fan-axiom violations.
#[derive(Debug, Clone)]
pub struct FanInput {
    pub dim: usize,
    pub cones: Vec<FanCone>,
}

impl<'de> Deserialize<'de> for FanInput {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = FanJson::deserialize(d)?;
        let cones = raw
            .cones
            .into_iter()
            .map(|c| {
                Cone::from_generators(raw.dim, &c.generators)
                    .map(|cone| FanCone { id: c.id, cone })
                    .map_err(D::Error::custom)
            })
            .collect::<Result<_, _>>()?;
        Ok(FanInput {
            dim: raw.dim,
            cones,
        })
    }
}

impl<'de> Deserialize<'de> for Fan {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = FanInput::deserialize(d)?;
        validate_fan(raw.dim, raw.cones).map_err(D::Error::custom)
    }
}
