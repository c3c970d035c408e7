//! Codimension filtration of the relation lattice.
//!
//! `F_k` is generated by the relations supported on stars of nonzero cones
//! of codimension at most `k`. The filtration depth of a relation is the
//! first level containing it. For complete fans the stars of rays already
//! generate everything; [`local_decompose`] makes that explicit by splitting
//! a relation into star-supported pieces.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{ConeRef, Fan, FanError};
use crate::intlin::{self, IntMatrix, IntVector, LinAlgError, Sublattice};
use crate::lattices::{self, LatticeError, SupportPolicy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("vector has length {found}, expected one entry per ray ({expected})")]
    WrongLength { expected: usize, found: usize },
    #[error("not a relation: the ray map sends it to {0:?}")]
    NotARelation(Vec<String>),
    #[error("depth is only defined for nonzero relations")]
    ZeroRelation,
    #[error("local decomposition requires a complete fan")]
    NotComplete,
    #[error("routing failure in local decomposition: {0}")]
    RoutingFailure(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Filtration depth of a relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Depth {
    Level(usize),
    /// Not contained in any filtration level.
    Unreachable,
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Level(k) => write!(f, "{k}"),
            Depth::Unreachable => f.write_str("unreachable"),
        }
    }
}

impl Serialize for Depth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Depth::Level(k) => s.serialize_u64(*k as u64),
            Depth::Unreachable => s.serialize_str("unreachable"),
        }
    }
}

impl<'de> Deserialize<'de> for Depth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Level(u64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Level(k) => Ok(Depth::Level(k as usize)),
            Raw::Word(w) if w == "unreachable" => Ok(Depth::Unreachable),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("invalid depth `{w}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarContribution {
    pub cone: ConeRef,
    pub kernel_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationProfile {
    pub policy: SupportPolicy,
    /// The global relation lattice.
    pub relations: Sublattice,
    /// `F_0, ..., F_n`.
    pub levels: Vec<Sublattice>,
    /// Star lattice ranks of every nonzero cone.
    pub contributions: Vec<StarContribution>,
}

impl FiltrationProfile {
    pub fn level_ranks(&self) -> Vec<usize> {
        self.levels.iter().map(Sublattice::rank).collect()
    }

    /// Cones of codimension at most `k` whose star lattice is nonzero.
    pub fn contributing(&self, k: usize) -> impl Iterator<Item = &StarContribution> {
        self.contributions
            .iter()
            .filter(move |c| c.cone.codim <= k && c.kernel_rank > 0)
    }

    /// Smallest `k` with `r` in `F_k`. `r` must be a nonzero relation.
    pub fn depth_of(&self, r: &[BigInt]) -> Result<Depth, FiltrationError> {
        if r.len() != self.relations.ambient_rank() {
            return Err(FiltrationError::WrongLength {
                expected: self.relations.ambient_rank(),
                found: r.len(),
            });
        }
        if r.iter().all(Zero::is_zero) {
            return Err(FiltrationError::ZeroRelation);
        }
        for (k, level) in self.levels.iter().enumerate() {
            if level.contains(r)? {
                return Ok(Depth::Level(k));
            }
        }
        Ok(Depth::Unreachable)
    }
}

pub fn filtration(fan: &Fan, policy: SupportPolicy) -> Result<FiltrationProfile, FiltrationError> {
    let m = fan.num_rays();
    let n = fan.rank();
    let stars: Vec<(ConeRef, Sublattice)> = fan
        .cones()
        .par_iter()
        .filter(|c| !c.is_zero())
        .map(|c| {
            lattices::rel_lattice_star(fan, c, policy).map(|rel| (c.clone(), rel.sublattice))
        })
        .collect::<Result<_, _>>()?;

    let mut levels = Vec::with_capacity(n + 1);
    let mut current = Sublattice::zero(m);
    for k in 0..=n {
        let mut parts = vec![current];
        parts.extend(
            stars
                .iter()
                .filter(|(c, _)| c.codim == k)
                .map(|(_, s)| s.clone()),
        );
        current = intlin::lattice_sum(m, &parts)?;
        levels.push(current.clone());
    }
    Ok(FiltrationProfile {
        policy,
        relations: lattices::rel_lattice(fan).sublattice,
        levels,
        contributions: stars
            .into_iter()
            .map(|(cone, s)| StarContribution {
                cone,
                kernel_rank: s.rank(),
            })
            .collect(),
    })
}

/// Ensures `r` is a relation of `fan`.
pub fn check_relation(fan: &Fan, r: &[BigInt]) -> Result<(), FiltrationError> {
    if r.len() != fan.num_rays() {
        return Err(FiltrationError::WrongLength {
            expected: fan.num_rays(),
            found: r.len(),
        });
    }
    let image = fan.apply_ray_map(r)?;
    if image.iter().any(|x| !x.is_zero()) {
        return Err(FiltrationError::NotARelation(
            image.iter().map(ToString::to_string).collect(),
        ));
    }
    Ok(())
}

pub fn depth(fan: &Fan, r: &[BigInt], policy: SupportPolicy) -> Result<Depth, FiltrationError> {
    check_relation(fan, r)?;
    filtration(fan, policy)?.depth_of(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub policy: SupportPolicy,
    /// `None` when completeness cannot be decided.
    pub complete: Option<bool>,
    pub relation_rank: usize,
    pub level_ranks: Vec<usize>,
    /// `F_{n-1} = L_rel`.
    pub below_top_generates: bool,
    /// `F_n = L_rel`.
    pub top_generates: bool,
    /// Complete fan whose `F_{n-1}` falls short of `L_rel`.
    pub violates_local_generation: bool,
}

pub fn check_generation(fan: &Fan, policy: SupportPolicy) -> Result<GenerationReport, FiltrationError> {
    let profile = filtration(fan, policy)?;
    let complete = fan.is_complete().ok();
    let n = fan.rank();
    let below_top = match n {
        0 => Sublattice::zero(fan.num_rays()),
        _ => profile.levels[n - 1].clone(),
    };
    let below_top_generates = intlin::lattice_equal(&below_top, &profile.relations)?;
    let top_generates = intlin::lattice_equal(&profile.levels[n], &profile.relations)?;
    Ok(GenerationReport {
        policy,
        complete,
        relation_rank: profile.relations.rank(),
        level_ranks: profile.level_ranks(),
        below_top_generates,
        top_generates,
        violates_local_generation: complete == Some(true) && !below_top_generates,
    })
}

/// A relation whose depth differs between the two support policies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyDiscrepancy {
    pub relation: IntVector,
    pub inclusive: Depth,
    pub exclusive: Depth,
}

/// Compares depths under both policies for each given relation and returns
/// the ones that disagree.
pub fn policy_discrepancies(
    fan: &Fan,
    relations: &[IntVector],
) -> Result<Vec<PolicyDiscrepancy>, FiltrationError> {
    let inclusive = filtration(fan, SupportPolicy::Inclusive)?;
    let exclusive = filtration(fan, SupportPolicy::Exclusive)?;
    let mut out = Vec::new();
    for r in relations {
        check_relation(fan, r)?;
        let a = inclusive.depth_of(r)?;
        let b = exclusive.depth_of(r)?;
        if a != b {
            out.push(PolicyDiscrepancy {
                relation: r.clone(),
                inclusive: a,
                exclusive: b,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionRoute {
    /// The zero relation.
    Trivial,
    /// The relation already lives on the star of a single ray.
    SingleStar,
    /// Defects were shifted along star chains only.
    ChainMoves,
    /// Chain moves stalled at `step`; the remainder was solved as an integer
    /// combination of star-lattice generators.
    LatticeFallback { step: usize },
}

/// `relation = sum of pieces`, each piece a relation supported on the star
/// of its ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub relation: IntVector,
    /// `(ray, piece)`, sorted by ray, zero pieces omitted.
    pub pieces: Vec<(usize, IntVector)>,
    pub route: DecompositionRoute,
    /// Number of single-hop moves performed.
    pub moves: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub sums_to_relation: bool,
    pub pieces_are_relations: bool,
    pub supports_in_stars: bool,
}

impl DecompositionCheck {
    pub fn passed(&self) -> bool {
        self.sums_to_relation && self.pieces_are_relations && self.supports_in_stars
    }
}

impl Decomposition {
    /// Re-verifies the three defining properties against `fan`.
    pub fn check(&self, fan: &Fan) -> Result<DecompositionCheck, FiltrationError> {
        let m = fan.num_rays();
        let mut total = vec![BigInt::zero(); m];
        let mut in_kernel = true;
        let mut supported = true;
        for (ray, piece) in &self.pieces {
            for (t, x) in total.iter_mut().zip(piece) {
                *t += x;
            }
            in_kernel &= fan.apply_ray_map(piece)?.iter().all(Zero::is_zero);
            let support = star_of_ray(fan, *ray)?;
            supported &= piece
                .iter()
                .enumerate()
                .all(|(i, x)| x.is_zero() || support.contains(&i));
        }
        Ok(DecompositionCheck {
            sums_to_relation: total == self.relation,
            pieces_are_relations: in_kernel,
            supports_in_stars: supported,
        })
    }
}

fn star_of_ray(fan: &Fan, ray: usize) -> Result<BTreeSet<usize>, FanError> {
    let cone = fan.cone(&[ray])?;
    Ok(fan.star(cone)?.ray_set.into_iter().collect())
}

/// Splits a relation of a complete fan into relations supported on stars of
/// rays.
///
/// Every coordinate starts in the slot of its own ray. Slots are then
/// processed in ray order; the defect `V(x_k)` of slot `k` is pushed to a
/// later slot along a shortest chain of rays with overlapping stars, each
/// hop moving an integer vector supported on the overlap whose image is the
/// defect. If no chain can carry the defect, the remaining part is solved
/// directly over the star-lattice generators.
pub fn local_decompose(fan: &Fan, r: &[BigInt]) -> Result<Decomposition, FiltrationError> {
    if !fan.is_complete().unwrap_or(false) {
        return Err(FiltrationError::NotComplete);
    }
    check_relation(fan, r)?;
    let m = fan.num_rays();
    let relation = r.to_vec();
    if relation.iter().all(Zero::is_zero) {
        return Ok(Decomposition {
            relation,
            pieces: Vec::new(),
            route: DecompositionRoute::Trivial,
            moves: 0,
        });
    }

    let stars: Vec<BTreeSet<usize>> = (0..m)
        .map(|i| star_of_ray(fan, i))
        .collect::<Result<_, _>>()?;

    let support: Vec<usize> = (0..m).filter(|&i| !relation[i].is_zero()).collect();
    if let Some(ray) = (0..m).find(|&i| support.iter().all(|s| stars[i].contains(s))) {
        let d = Decomposition {
            relation: relation.clone(),
            pieces: vec![(ray, relation)],
            route: DecompositionRoute::SingleStar,
            moves: 0,
        };
        return verified(fan, d);
    }

    let neighbours: Vec<Vec<usize>> = (0..m)
        .map(|a| {
            (0..m)
                .filter(|&b| b != a && !stars[a].is_disjoint(&stars[b]))
                .collect()
        })
        .collect();

    let mut slots: Vec<IntVector> = (0..m)
        .map(|i| {
            let mut v = vec![BigInt::zero(); m];
            v[i] = relation[i].clone();
            v
        })
        .collect();
    let mut moves = 0;
    let mut route = DecompositionRoute::ChainMoves;

    for k in 0..m {
        let defect = fan.apply_ray_map(&slots[k])?;
        if defect.iter().all(Zero::is_zero) {
            continue;
        }
        let mut routed = false;
        for path in chains_to_later_slots(&neighbours, k) {
            if let Some(hops) = hop_vectors(fan, &stars, &path, &defect)? {
                for (w, y) in path.windows(2).zip(hops) {
                    for (i, yi) in y.iter().enumerate() {
                        slots[w[0]][i] -= yi;
                        slots[w[1]][i] += yi;
                    }
                    moves += 1;
                }
                routed = true;
                break;
            }
        }
        if !routed {
            route = DecompositionRoute::LatticeFallback { step: k };
            lattice_fallback(fan, &stars, &mut slots, k)?;
            break;
        }
    }

    let pieces = slots
        .into_iter()
        .enumerate()
        .filter(|(_, v)| v.iter().any(|x| !x.is_zero()))
        .collect();
    verified(
        fan,
        Decomposition {
            relation,
            pieces,
            route,
            moves,
        },
    )
}

fn verified(fan: &Fan, d: Decomposition) -> Result<Decomposition, FiltrationError> {
    let check = d.check(fan)?;
    if !check.passed() {
        return Err(FiltrationError::RoutingFailure(format!(
            "decomposition failed its own verification: {check:?}"
        )));
    }
    Ok(d)
}

/// Shortest chains from `start` to every later slot, nearest first, ties by
/// smaller ray index.
fn chains_to_later_slots(neighbours: &[Vec<usize>], start: usize) -> Vec<Vec<usize>> {
    let m = neighbours.len();
    let mut parent = vec![usize::MAX; m];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([start]);
    parent[start] = start;
    while let Some(a) = queue.pop_front() {
        order.push(a);
        for &b in &neighbours[a] {
            if parent[b] == usize::MAX {
                parent[b] = a;
                queue.push_back(b);
            }
        }
    }
    order
        .into_iter()
        .filter(|&v| v > start)
        .map(|target| {
            let mut path = vec![target];
            let mut v = target;
            while v != start {
                v = parent[v];
                path.push(v);
            }
            path.reverse();
            path
        })
        .collect()
}

/// For each hop of `path`, an integer vector supported on the overlap of the
/// two stars that maps to `defect`; `None` if some hop cannot carry it.
fn hop_vectors(
    fan: &Fan,
    stars: &[BTreeSet<usize>],
    path: &[usize],
    defect: &[BigInt],
) -> Result<Option<Vec<IntVector>>, FiltrationError> {
    let mut hops = Vec::with_capacity(path.len() - 1);
    for w in path.windows(2) {
        let overlap: Vec<usize> = stars[w[0]].intersection(&stars[w[1]]).copied().collect();
        let generators = IntMatrix::from_rows(fan.rank(), fan.ray_vectors_of(&overlap))?;
        let Some(coeffs) = intlin::solve_combination(&generators, defect)? else {
            return Ok(None);
        };
        let mut y = vec![BigInt::zero(); fan.num_rays()];
        for (&i, c) in overlap.iter().zip(coeffs) {
            y[i] = c;
        }
        hops.push(y);
    }
    Ok(Some(hops))
}

/// Keeps slots before `step` and rewrites the remainder
/// `r - sum_{i<step} x_i` as a sum of star-lattice elements, added slot-wise.
fn lattice_fallback(
    fan: &Fan,
    stars: &[BTreeSet<usize>],
    slots: &mut [IntVector],
    step: usize,
) -> Result<(), FiltrationError> {
    let m = fan.num_rays();
    let mut residual = vec![BigInt::zero(); m];
    for slot in &slots[step..] {
        for (t, x) in residual.iter_mut().zip(slot) {
            *t += x;
        }
    }
    let mut owners = Vec::new();
    let mut generators = Vec::new();
    for (ray, star) in stars.iter().enumerate() {
        let columns: Vec<usize> = star.iter().copied().collect();
        for g in lattices::kernel_over(fan, &columns).basis_vectors() {
            owners.push(ray);
            generators.push(g);
        }
    }
    let matrix = IntMatrix::from_rows(m, generators.clone())?;
    let coeffs = intlin::solve_combination(&matrix, &residual)?.ok_or_else(|| {
        FiltrationError::RoutingFailure(format!(
            "remainder at step {step} is not generated by star relations"
        ))
    })?;
    for slot in slots[step..].iter_mut() {
        slot.iter_mut().for_each(|x| *x = BigInt::zero());
    }
    for ((owner, g), c) in owners.iter().zip(&generators).zip(&coeffs) {
        if c.is_zero() {
            continue;
        }
        for (x, gi) in slots[*owner].iter_mut().zip(g) {
            *x += c * gi;
        }
    }
    Ok(())
}
