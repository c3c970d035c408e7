//! Stellar subdivisions and relation lattices under refinement.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{self, build_fan, ConeRef, Fan, FanError, FanOptions};
use crate::filtration::{self, Depth, FiltrationError};
use crate::intlin::IntVector;
use crate::lattices::{self, SupportPolicy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefineError {
    #[error("stellar subdivision needs a simplicial fan")]
    NotSimplicial,
    #[error("new ray {0:?} is already a ray of the fan")]
    ExistingRay(Vec<String>),
    #[error("new ray is not in the relative interior of cone {0:?}")]
    NotInRelativeInterior(Vec<usize>),
    #[error("ray {0} of the coarser fan is not a ray of the refinement")]
    RayMissing(usize),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
}

fn as_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Star subdivision of `fan` at a new ray through the relative interior of
/// `sigma`. The new ray is appended after the existing rays.
pub fn stellar_subdivide(fan: &Fan, sigma: &ConeRef, w: &[BigInt]) -> Result<Fan, RefineError> {
    if !fan.is_simplicial() {
        return Err(RefineError::NotSimplicial);
    }
    let sigma = fan.cone(&sigma.ray_indices)?.clone();
    let w = fan::primitive(w)?;
    if fan.rays().contains(&w) {
        return Err(RefineError::ExistingRay(as_strings(&w)));
    }
    let generators = fan.ray_vectors_of(&sigma.ray_indices);
    if sigma.is_zero() || fan::relative_interior_coefficients(&generators, &w).is_none() {
        return Err(RefineError::NotInRelativeInterior(sigma.ray_indices.clone()));
    }

    let new_index = fan.num_rays();
    let mut maximal = Vec::new();
    for m in fan.maximal_cones() {
        if !sigma.is_face_of(m) {
            maximal.push(m.ray_indices.clone());
            continue;
        }
        for rho in &sigma.ray_indices {
            let mut c: Vec<usize> = m.ray_indices.iter().copied().filter(|x| x != rho).collect();
            c.push(new_index);
            maximal.push(c);
        }
    }
    let mut rays = fan.rays().to_vec();
    rays.push(w);
    let options = FanOptions {
        name: fan.name().map(|n| format!("{n}*")),
        assert_complete: fan.asserted_complete(),
        ..Default::default()
    };
    Ok(build_fan(fan.rank(), rays, maximal, options)?)
}

/// Position of each ray of `before` among the rays of `after`.
pub fn ray_embedding(before: &Fan, after: &Fan) -> Result<Vec<usize>, RefineError> {
    let positions: BTreeMap<&IntVector, usize> =
        after.rays().iter().enumerate().map(|(i, v)| (v, i)).collect();
    before
        .rays()
        .iter()
        .enumerate()
        .map(|(i, v)| positions.get(v).copied().ok_or(RefineError::RayMissing(i)))
        .collect()
}

/// Zero-pads a relation of `before` to the rays of `after`, checking that
/// the result is a relation there.
pub fn refinement_injection(before: &Fan, after: &Fan, r: &[BigInt]) -> Result<IntVector, RefineError> {
    filtration::check_relation(before, r)?;
    let embedding = ray_embedding(before, after)?;
    let mut padded = vec![BigInt::zero(); after.num_rays()];
    for (x, &p) in r.iter().zip(&embedding) {
        padded[p] = x.clone();
    }
    filtration::check_relation(after, &padded)?;
    Ok(padded)
}

/// Every cone of `after` sits inside some cone of `before`.
pub fn is_refinement(before: &Fan, after: &Fan) -> bool {
    after.maximal_cones().iter().all(|c| {
        before.maximal_cones().iter().any(|b| {
            c.ray_indices
                .iter()
                .all(|&r| fan::cone_contains(before, b, &after.rays()[r]))
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Preserved,
    Lowered,
    Violation,
    /// The relation had no depth before refinement.
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthRecord {
    pub relation: IntVector,
    pub padded: IntVector,
    pub policy: SupportPolicy,
    pub before: Depth,
    pub after: Depth,
    pub verdict: Verdict,
}

fn verdict(before: Depth, after: Depth) -> Verdict {
    match (before, after) {
        (Depth::Unreachable, _) => Verdict::Incomparable,
        (Depth::Level(_), Depth::Unreachable) => Verdict::Violation,
        (Depth::Level(a), Depth::Level(b)) if b > a => Verdict::Violation,
        (Depth::Level(a), Depth::Level(b)) if b < a => Verdict::Lowered,
        _ => Verdict::Preserved,
    }
}

#[derive(Debug, Clone)]
pub struct SubdivisionTrace {
    pub trial: usize,
    pub before: Fan,
    pub after: Fan,
    pub new_ray: IntVector,
    pub subdivided_cone: ConeRef,
    /// Index of each old ray in `after`.
    pub injection: Vec<usize>,
    pub depth_records: Vec<DepthRecord>,
}

impl SubdivisionTrace {
    pub fn violations(&self) -> impl Iterator<Item = &DepthRecord> {
        self.depth_records
            .iter()
            .filter(|r| r.verdict == Verdict::Violation)
    }
}

/// Subdivides `before` and compares depths of its basis relations.
pub fn trace_subdivision(
    before: &Fan,
    sigma: &ConeRef,
    w: &[BigInt],
    policy: SupportPolicy,
    trial: usize,
) -> Result<SubdivisionTrace, RefineError> {
    let after = stellar_subdivide(before, sigma, w)?;
    let profile_before = filtration::filtration(before, policy)?;
    let profile_after = filtration::filtration(&after, policy)?;
    let mut depth_records = Vec::new();
    for r in lattices::rel_lattice(before).sublattice.basis_vectors() {
        let padded = refinement_injection(before, &after, &r)?;
        let d0 = profile_before.depth_of(&r)?;
        let d1 = profile_after.depth_of(&padded)?;
        depth_records.push(DepthRecord {
            relation: r,
            padded,
            policy,
            before: d0,
            after: d1,
            verdict: verdict(d0, d1),
        });
    }
    Ok(SubdivisionTrace {
        trial,
        injection: ray_embedding(before, &after)?,
        new_ray: after.rays()[after.num_rays() - 1].clone(),
        subdivided_cone: sigma.clone(),
        before: before.clone(),
        after,
        depth_records,
    })
}

#[derive(Debug, Clone)]
pub struct ConjectureScan {
    pub policy: SupportPolicy,
    pub seed: u64,
    pub traces: Vec<SubdivisionTrace>,
    /// Trials that produced no subdivision, with the reason.
    pub skipped: Vec<(usize, String)>,
}

impl ConjectureScan {
    pub fn violation_count(&self) -> usize {
        self.traces.iter().map(|t| t.violations().count()).sum()
    }
}

const MAX_DRAWS: usize = 8;

/// Random interior ray of a random cone of dimension at least two. Each
/// trial has its own stream so results do not depend on scheduling.
pub fn random_subdivision_site(fan: &Fan, seed: u64, trial: usize) -> Option<(ConeRef, IntVector)> {
    let candidates: Vec<&ConeRef> = fan.cones().iter().filter(|c| c.dim >= 2).collect();
    if candidates.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    for _ in 0..MAX_DRAWS {
        let cone = candidates[rng.gen_range(0..candidates.len())];
        let mut w = vec![BigInt::zero(); fan.rank()];
        for &r in &cone.ray_indices {
            let c = BigInt::from(rng.gen_range(1i64..=3));
            for (wi, vi) in w.iter_mut().zip(&fan.rays()[r]) {
                *wi += &c * vi;
            }
        }
        let w = fan::primitive(&w).expect("interior point of a strongly convex cone");
        if !fan.rays().contains(&w) {
            return Some((cone.clone(), w));
        }
    }
    None
}

/// Runs `trials` independent random stellar subdivisions of `fan` and
/// records the depth of every basis relation before and after.
pub fn conjecture_scan(fan: &Fan, policy: SupportPolicy, trials: usize, seed: u64) -> ConjectureScan {
    let results: Vec<Result<SubdivisionTrace, String>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let (cone, w) = random_subdivision_site(fan, seed, trial)
                .ok_or_else(|| "no admissible subdivision site".to_string())?;
            trace_subdivision(fan, &cone, &w, policy, trial).map_err(|e| e.to_string())
        })
        .collect();
    let mut traces = Vec::new();
    let mut skipped = Vec::new();
    for (trial, r) in results.into_iter().enumerate() {
        match r {
            Ok(t) => traces.push(t),
            Err(e) => {
                log::warn!("trial {trial} skipped: {e}");
                skipped.push((trial, e));
            }
        }
    }
    ConjectureScan {
        policy,
        seed,
        traces,
        skipped,
    }
}
