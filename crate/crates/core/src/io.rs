//! Serializable fan description used by the command-line tool.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{build_fan, Fan, FanError, FanOptions, Validation};
use crate::intlin::IntVector;

/// A coordinate: JSON number, or decimal string for values beyond 64 bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Small(i64),
    Big(String),
}

impl Coordinate {
    fn to_bigint(&self) -> Result<BigInt, FanFileError> {
        match self {
            Coordinate::Small(x) => Ok(BigInt::from(*x)),
            Coordinate::Big(s) => BigInt::from_str(s.trim()).map_err(|_| FanFileError::BadInteger(s.clone())),
        }
    }

    fn from_bigint(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(v) => Coordinate::Small(v),
            None => Coordinate::Big(x.to_string()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assert_complete: Option<bool>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub trust: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub rank: usize,
    pub rays: Vec<Vec<Coordinate>>,
    pub maximal_cones: Vec<Vec<usize>>,
    /// Full cone list, needed only for non-simplicial fans.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cones: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub metadata: FanMetadata,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanFileError {
    #[error("not an integer: {0:?}")]
    BadInteger(String),
    #[error(transparent)]
    Fan(#[from] FanError),
}

impl FanFileError {
    /// Malformed input as opposed to a well-formed but invalid fan.
    pub fn is_shape_error(&self) -> bool {
        matches!(
            self,
            FanFileError::BadInteger(_)
                | FanFileError::Fan(FanError::WrongLength { .. })
                | FanFileError::Fan(FanError::RayIndexOutOfRange { .. })
        )
    }
}

impl FanFile {
    pub fn ray_vectors(&self) -> Result<Vec<IntVector>, FanFileError> {
        self.rays
            .iter()
            .map(|r| r.iter().map(Coordinate::to_bigint).collect())
            .collect()
    }

    /// Builds and validates the fan; `force_trust` overrides the metadata.
    pub fn to_fan(&self, force_trust: bool) -> Result<Fan, FanFileError> {
        let options = FanOptions {
            cones: self.cones.clone(),
            trust: force_trust || self.metadata.trust,
            assert_complete: self.metadata.assert_complete,
            name: self.metadata.name.clone(),
            ..Default::default()
        };
        Ok(build_fan(self.rank, self.ray_vectors()?, self.maximal_cones.clone(), options)?)
    }

    pub fn from_fan(fan: &Fan) -> Self {
        FanFile {
            rank: fan.rank(),
            rays: fan
                .rays()
                .iter()
                .map(|r| r.iter().map(Coordinate::from_bigint).collect())
                .collect(),
            maximal_cones: fan.maximal_cones().iter().map(|c| c.ray_indices.clone()).collect(),
            cones: fan.explicit_cones(),
            metadata: FanMetadata {
                name: fan.name().map(str::to_string),
                assert_complete: fan.asserted_complete(),
                trust: fan.validation() == Validation::Trusted,
            },
        }
    }
}
