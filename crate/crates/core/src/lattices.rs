//! Global and local lattice invariants of a fan.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{ConeRef, Fan, FanError};
use crate::intlin::{self, IntMatrix, LatticeIndex, LinAlgError, Sublattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("star-supported relations are not defined for the zero cone")]
    ZeroCone,
    #[error("the rays span a rank {found} sublattice, not all of N (rank {rank})")]
    RaysDoNotSpan { rank: usize, found: usize },
}

/// Which rays of a star carry star-supported relations.
///
/// `Inclusive` takes every ray of the star, `Exclusive` drops the rays of
/// the cone itself.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportPolicy {
    #[default]
    Inclusive,
    Exclusive,
}

impl SupportPolicy {
    pub const ALL: [SupportPolicy; 2] = [SupportPolicy::Inclusive, SupportPolicy::Exclusive];
}

impl fmt::Display for SupportPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SupportPolicy::Inclusive => "inclusive",
            SupportPolicy::Exclusive => "exclusive",
        })
    }
}

impl FromStr for SupportPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inclusive" => Ok(SupportPolicy::Inclusive),
            "exclusive" => Ok(SupportPolicy::Exclusive),
            other => Err(format!("unknown support policy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayLattice {
    pub sublattice: Sublattice,
    pub index: LatticeIndex,
}

/// Relations among a labeled ray set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelLattice {
    /// For each coordinate, the index of the ray of the base fan it stands for.
    pub ray_labels: Vec<usize>,
    pub sublattice: Sublattice,
}

impl RelLattice {
    pub fn rank(&self) -> usize {
        self.sublattice.rank()
    }
}

pub fn ray_lattice(fan: &Fan) -> RayLattice {
    let generators =
        IntMatrix::from_rows(fan.rank(), fan.rays().to_vec()).expect("ray lengths checked");
    let sublattice = Sublattice::from_generators(&generators);
    let index = intlin::sublattice_index(&sublattice);
    RayLattice { sublattice, index }
}

/// Kernel of `V` restricted to `columns`, extended by zero to all rays.
pub fn kernel_over(fan: &Fan, columns: &[usize]) -> Sublattice {
    let local = intlin::integer_kernel(&fan.ray_matrix().select_columns(columns));
    local.extend_by_zero(fan.num_rays(), columns)
}

pub fn rel_lattice(fan: &Fan) -> RelLattice {
    RelLattice {
        ray_labels: (0..fan.num_rays()).collect(),
        sublattice: intlin::integer_kernel(&fan.ray_matrix()),
    }
}

/// Rays of the star of `tau` that may carry relations under `policy`.
pub fn star_support(fan: &Fan, tau: &ConeRef, policy: SupportPolicy) -> Result<Vec<usize>, FanError> {
    let star = fan.star(tau)?;
    Ok(match policy {
        SupportPolicy::Inclusive => star.ray_set,
        SupportPolicy::Exclusive => star
            .ray_set
            .into_iter()
            .filter(|r| !tau.ray_indices.contains(r))
            .collect(),
    })
}

/// Relations supported on the star of a nonzero cone, in global coordinates.
pub fn rel_lattice_star(fan: &Fan, tau: &ConeRef, policy: SupportPolicy) -> Result<RelLattice, LatticeError> {
    if tau.is_zero() {
        return Err(LatticeError::ZeroCone);
    }
    let support = star_support(fan, tau, policy)?;
    Ok(RelLattice {
        ray_labels: (0..fan.num_rays()).collect(),
        sublattice: kernel_over(fan, &support),
    })
}

/// Relations among the rays of `tau` itself, in global coordinates.
pub fn rel_lattice_internal(fan: &Fan, tau: &ConeRef) -> Result<RelLattice, LatticeError> {
    let tau = fan.cone(&tau.ray_indices)?;
    Ok(RelLattice {
        ray_labels: (0..fan.num_rays()).collect(),
        sublattice: kernel_over(fan, &tau.ray_indices),
    })
}

/// Relation lattice of the localized fan at `tau`, over the quotient rays.
pub fn rel_lattice_localized(fan: &Fan, tau: &ConeRef) -> Result<RelLattice, LatticeError> {
    let quotient = fan.localize(tau)?;
    Ok(RelLattice {
        sublattice: intlin::integer_kernel(&quotient.ray_matrix()),
        ray_labels: quotient.ray_origin,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    pub free_rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
}

/// Cokernel of `M -> Z^{rays}`, the transpose of the ray map.
pub fn class_group(fan: &Fan) -> Result<ClassGroup, LatticeError> {
    let transpose = fan.ray_matrix().transpose();
    let smith = intlin::snf(&transpose);
    let rank = smith.rank();
    if rank != fan.rank() {
        return Err(LatticeError::RaysDoNotSpan {
            rank: fan.rank(),
            found: rank,
        });
    }
    Ok(ClassGroup {
        free_rank: fan.num_rays() - fan.rank(),
        torsion: smith
            .diagonal()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect(),
    })
}
