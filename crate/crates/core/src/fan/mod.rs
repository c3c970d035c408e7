//! Rational fans: rays, cones, stars, completeness and localization.
//!
//! Cones are stored combinatorially as sorted sets of ray indices. Geometry
//! (containment, intersections) is recomputed from the ray vectors when
//! needed.

mod geometry;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlin::{self, IntMatrix, IntVector, LinAlgError};

pub(crate) use geometry::{in_simplicial_cone, relative_interior_coefficients};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray {0} is the zero vector")]
    ZeroRay(usize),
    #[error("ray {ray} has length {found}, expected {expected}")]
    WrongLength {
        ray: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate ray: rays {first} and {second} have the same primitive generator")]
    DuplicateRay { first: usize, second: usize },
    #[error("cone {cone} refers to ray index {index}, but there are only {num_rays} rays")]
    RayIndexOutOfRange {
        cone: usize,
        index: usize,
        num_rays: usize,
    },
    #[error("cone {0:?} has linearly dependent rays; pass an explicit cone list with trust for non-simplicial fans")]
    DependentRays(Vec<usize>),
    #[error("non-simplicial fan requires the trust option")]
    NonSimplicialUntrusted,
    #[error("cones {0:?} and {1:?} do not intersect in a common face")]
    IntersectionViolation(Vec<usize>, Vec<usize>),
    #[error("cone {0:?} is not in the fan")]
    ConeNotInFan(Vec<usize>),
    #[error("operation requires a simplicial fan")]
    NotSimplicial,
    #[error("completeness of a non-simplicial fan must be asserted in its metadata")]
    CompletenessUnknown,
    #[error("matrix is not a unimodular {0}x{0} matrix")]
    NotUnimodular(usize),
    #[error("the zero vector has no primitive generator")]
    ZeroVector,
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// A cone of a fan: sorted ray indices plus cached dimension data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeRef {
    pub ray_indices: Vec<usize>,
    pub dim: usize,
    pub codim: usize,
}

impl ConeRef {
    pub fn is_zero(&self) -> bool {
        self.ray_indices.is_empty()
    }

    pub fn is_face_of(&self, other: &ConeRef) -> bool {
        is_subset(&self.ray_indices, &other.ray_indices)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Validation {
    /// Every pairwise intersection was checked exactly.
    Full,
    /// Some intersections were only checked by sampling.
    Partial,
    /// Intersection checks were skipped on request.
    Trusted,
}

#[derive(Debug, Clone)]
pub struct FanOptions {
    /// Full cone list; required for non-simplicial input.
    pub cones: Option<Vec<Vec<usize>>>,
    pub trust: bool,
    /// Completeness asserted by the caller (used for non-simplicial fans).
    pub assert_complete: Option<bool>,
    /// Largest rank for which pairwise intersections are checked exactly.
    pub exact_rank_limit: usize,
    /// Cap on the inequality count during Fourier-Motzkin elimination.
    pub elimination_limit: usize,
    pub name: Option<String>,
}

impl Default for FanOptions {
    fn default() -> Self {
        FanOptions {
            cones: None,
            trust: false,
            assert_complete: None,
            exact_rank_limit: 4,
            elimination_limit: 20_000,
            name: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fan {
    rank: usize,
    rays: Vec<IntVector>,
    cones: Vec<ConeRef>,
    lookup: BTreeMap<Vec<usize>, usize>,
    maximal: Vec<usize>,
    simplicial: bool,
    validation: Validation,
    asserted_complete: Option<bool>,
    findings: Vec<String>,
    name: Option<String>,
}

/// Primitive generator of the ray through `v`.
pub fn primitive(v: &[BigInt]) -> Result<IntVector, FanError> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(FanError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)) == BigInt::from(1)
}

fn subsets(s: &[usize]) -> Vec<Vec<usize>> {
    (0u64..1 << s.len())
        .map(|mask| {
            s.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

pub fn build_fan(
    rank: usize,
    ray_vectors: Vec<IntVector>,
    maximal_cones: Vec<Vec<usize>>,
    options: FanOptions,
) -> Result<Fan, FanError> {
    let mut rays = Vec::with_capacity(ray_vectors.len());
    let mut seen: BTreeMap<IntVector, usize> = BTreeMap::new();
    for (i, v) in ray_vectors.iter().enumerate() {
        if v.len() != rank {
            return Err(FanError::WrongLength {
                ray: i,
                expected: rank,
                found: v.len(),
            });
        }
        let p = primitive(v).map_err(|_| FanError::ZeroRay(i))?;
        if let Some(&first) = seen.get(&p) {
            return Err(FanError::DuplicateRay { first, second: i });
        }
        seen.insert(p.clone(), i);
        rays.push(p);
    }
    let num_rays = rays.len();

    let normalize = |list: &[Vec<usize>]| -> Result<Vec<Vec<usize>>, FanError> {
        list.iter()
            .enumerate()
            .map(|(ci, c)| {
                let set: BTreeSet<usize> = c.iter().copied().collect();
                if let Some(&bad) = set.iter().find(|&&x| x >= num_rays) {
                    return Err(FanError::RayIndexOutOfRange {
                        cone: ci,
                        index: bad,
                        num_rays,
                    });
                }
                Ok(set.into_iter().collect())
            })
            .collect()
    };
    let maximal_input = normalize(&maximal_cones)?;
    let explicit = options.cones.as_deref().map(normalize).transpose()?;

    let dim_of = |c: &[usize]| -> usize {
        let cols: Vec<IntVector> = c.iter().map(|&i| rays[i].clone()).collect();
        IntMatrix::from_columns(rank, &cols)
            .expect("ray length checked")
            .rank()
    };

    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    all.insert(Vec::new());
    let mut simplicial = true;
    let mut listed: Vec<Vec<usize>> = maximal_input.clone();
    if let Some(extra) = &explicit {
        listed.extend(extra.iter().cloned());
    }
    for c in &listed {
        if dim_of(c) != c.len() {
            if explicit.is_none() {
                return Err(FanError::DependentRays(c.clone()));
            }
            simplicial = false;
        }
    }
    if simplicial {
        for c in &listed {
            all.extend(subsets(c));
        }
    } else {
        if !options.trust {
            return Err(FanError::NonSimplicialUntrusted);
        }
        for c in &listed {
            all.extend(c.iter().map(|&r| vec![r]));
        }
        all.extend(listed.iter().cloned());
    }

    let mut cones: Vec<ConeRef> = all
        .into_iter()
        .map(|c| {
            let dim = if simplicial { c.len() } else { dim_of(&c) };
            ConeRef {
                ray_indices: c,
                dim,
                codim: rank - dim,
            }
        })
        .collect();
    cones.sort_by(|a, b| (a.dim, &a.ray_indices).cmp(&(b.dim, &b.ray_indices)));
    let lookup = cones
        .iter()
        .enumerate()
        .map(|(i, c)| (c.ray_indices.clone(), i))
        .collect();
    let maximal = (0..cones.len())
        .filter(|&i| {
            !cones
                .iter()
                .any(|o| o.ray_indices.len() > cones[i].ray_indices.len() && cones[i].is_face_of(o))
        })
        .collect();

    let mut fan = Fan {
        rank,
        rays,
        cones,
        lookup,
        maximal,
        simplicial,
        validation: Validation::Full,
        asserted_complete: options.assert_complete,
        findings: Vec::new(),
        name: options.name.clone(),
    };
    if options.trust {
        fan.validation = Validation::Trusted;
        fan.findings.push("pairwise intersections not checked (trusted input)".into());
    } else {
        fan.validate_intersections(&options)?;
    }
    Ok(fan)
}

impl Fan {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn cones(&self) -> &[ConeRef] {
        &self.cones
    }

    pub fn maximal_cones(&self) -> Vec<&ConeRef> {
        self.maximal.iter().map(|&i| &self.cones[i]).collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn validation(&self) -> Validation {
        self.validation
    }

    pub fn findings(&self) -> &[String] {
        &self.findings
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn asserted_complete(&self) -> Option<bool> {
        self.asserted_complete
    }

    /// Explicit cone list, needed to rebuild non-simplicial fans.
    pub fn explicit_cones(&self) -> Option<Vec<Vec<usize>>> {
        (!self.simplicial).then(|| self.cones.iter().map(|c| c.ray_indices.clone()).collect())
    }

    pub fn zero_cone(&self) -> &ConeRef {
        &self.cones[0]
    }

    /// Looks a cone up by its ray indices (any order).
    pub fn cone(&self, ray_indices: &[usize]) -> Result<&ConeRef, FanError> {
        let mut key = ray_indices.to_vec();
        key.sort_unstable();
        key.dedup();
        self.lookup
            .get(&key)
            .map(|&i| &self.cones[i])
            .ok_or(FanError::ConeNotInFan(key))
    }

    /// The `n x |rays|` matrix whose columns are the ray generators.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.rank, &self.rays).expect("ray lengths checked")
    }

    pub fn ray_vectors_of(&self, ray_indices: &[usize]) -> Vec<IntVector> {
        ray_indices.iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Applies the ray map `V` to a coefficient vector over all rays.
    pub fn apply_ray_map(&self, coefficients: &[BigInt]) -> Result<IntVector, LinAlgError> {
        self.ray_matrix().mul_vec(coefficients)
    }

    pub fn star(&self, tau: &ConeRef) -> Result<Star, FanError> {
        self.cone(&tau.ray_indices)?;
        let cones: Vec<ConeRef> = self
            .cones
            .iter()
            .filter(|s| tau.is_face_of(s))
            .cloned()
            .collect();
        let ray_set: BTreeSet<usize> = cones
            .iter()
            .flat_map(|c| c.ray_indices.iter().copied())
            .collect();
        Ok(Star {
            cones,
            ray_set: ray_set.into_iter().collect(),
        })
    }

    /// Completeness test for simplicial fans: pure of full dimension, every
    /// ridge in exactly two maximal cones, connected ridge graph, and a
    /// seeded sample of lattice points each covered by some maximal cone.
    pub fn is_complete(&self) -> Result<bool, FanError> {
        if !self.simplicial {
            return self.asserted_complete.ok_or(FanError::CompletenessUnknown);
        }
        let n = self.rank;
        let maximal = self.maximal_cones();
        if maximal.iter().any(|c| c.dim != n) {
            return Ok(false);
        }
        for ridge in self.cones.iter().filter(|c| c.dim + 1 == n) {
            let count = maximal.iter().filter(|m| ridge.is_face_of(m)).count();
            if count != 2 {
                return Ok(false);
            }
        }
        if !ridge_graph_connected(&maximal, n) {
            return Ok(false);
        }
        Ok(self.sampled_cover_check(&maximal))
    }

    fn sampled_cover_check(&self, maximal: &[&ConeRef]) -> bool {
        let n = self.rank;
        if n == 0 {
            return true;
        }
        let generators: Vec<Vec<IntVector>> = maximal
            .iter()
            .map(|c| self.ray_vectors_of(&c.ray_indices))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
        for _ in 0..48 {
            let point: IntVector = (0..n).map(|_| BigInt::from(rng.gen_range(-40i64..=40))).collect();
            if point.iter().all(Zero::is_zero) {
                continue;
            }
            if !generators.iter().any(|g| in_simplicial_cone(g, &point)) {
                return false;
            }
        }
        true
    }

    fn validate_intersections(&mut self, options: &FanOptions) -> Result<(), FanError> {
        if !self.simplicial {
            return Ok(());
        }
        let maximal: Vec<ConeRef> = self.maximal_cones().into_iter().cloned().collect();
        let mut sampled_pairs = 0usize;
        for (i, a) in maximal.iter().enumerate() {
            for b in &maximal[i + 1..] {
                let exact = if self.rank <= options.exact_rank_limit {
                    self.exact_pair_check(a, b, options.elimination_limit)
                } else {
                    None
                };
                let ok = match exact {
                    Some(ok) => ok,
                    None => {
                        sampled_pairs += 1;
                        self.sampled_pair_check(a, b)
                    }
                };
                if !ok {
                    return Err(FanError::IntersectionViolation(
                        a.ray_indices.clone(),
                        b.ray_indices.clone(),
                    ));
                }
            }
        }
        if sampled_pairs > 0 {
            self.validation = Validation::Partial;
            self.findings.push(format!(
                "{sampled_pairs} cone pairs checked by sampling only (partially validated)"
            ));
        }
        Ok(())
    }

    /// `cone(a) ∩ cone(b) = cone(a ∩ b)` decided by Fourier-Motzkin. `None`
    /// when the elimination outgrows `limit`.
    fn exact_pair_check(&self, a: &ConeRef, b: &ConeRef, limit: usize) -> Option<bool> {
        use num_rational::BigRational;
        use num_traits::One;

        let only_a: Vec<usize> = a
            .ray_indices
            .iter()
            .copied()
            .filter(|x| b.ray_indices.binary_search(x).is_err())
            .collect();
        if only_a.is_empty() || b.is_face_of(a) {
            return Some(true);
        }
        // variables: coefficients on a's rays, then on b's rays
        let na = a.ray_indices.len();
        let nb = b.ray_indices.len();
        let q = |x: &BigInt| BigRational::from_integer(x.clone());
        let mut rows: Vec<Vec<BigRational>> = (0..self.rank)
            .map(|r| {
                let mut row = Vec::with_capacity(na + nb);
                row.extend(a.ray_indices.iter().map(|&i| q(&self.rays[i][r])));
                row.extend(b.ray_indices.iter().map(|&i| -q(&self.rays[i][r])));
                row
            })
            .collect();
        let mut rhs = vec![BigRational::zero(); self.rank];
        let normalization = a
            .ray_indices
            .iter()
            .map(|i| {
                if only_a.contains(i) {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .chain(std::iter::repeat_n(BigRational::zero(), nb))
            .collect();
        rows.push(normalization);
        rhs.push(BigRational::one());
        match geometry::fm_feasible(na + nb, rows, rhs, limit) {
            Ok(feasible) => Some(!feasible),
            Err(_) => None,
        }
    }

    fn sampled_pair_check(&self, a: &ConeRef, b: &ConeRef) -> bool {
        let seed = a
            .ray_indices
            .iter()
            .chain(&b.ray_indices)
            .fold(17u64, |h, &x| h.wrapping_mul(31).wrapping_add(x as u64));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (x, y) in [(a, b), (b, a)] {
            if x.is_face_of(y) {
                continue;
            }
            let gx = self.ray_vectors_of(&x.ray_indices);
            let gy = self.ray_vectors_of(&y.ray_indices);
            for _ in 0..32 {
                let mut p = vec![BigInt::zero(); self.rank];
                for g in &gx {
                    let c = BigInt::from(rng.gen_range(1i64..=9));
                    for (pi, gi) in p.iter_mut().zip(g) {
                        *pi += &c * gi;
                    }
                }
                if in_simplicial_cone(&gy, &p) {
                    return false;
                }
            }
        }
        true
    }

    /// Projects the star of `tau` to `N / sat(span tau)`.
    pub fn localize(&self, tau: &ConeRef) -> Result<QuotientFan, FanError> {
        let tau = self.cone(&tau.ray_indices)?.clone();
        let star = self.star(&tau)?;
        let tau_matrix = IntMatrix::from_columns(self.rank, &self.ray_vectors_of(&tau.ray_indices))?;
        let smith = intlin::snf(&tau_matrix);
        let d = smith.rank();
        let quotient_rank = self.rank - d;
        let projection = IntMatrix::from_rows(
            self.rank,
            (d..self.rank).map(|i| smith.u.row(i).to_vec()).collect(),
        )?;

        let mut rays = Vec::new();
        let mut ray_origin = Vec::new();
        let mut warnings = Vec::new();
        for &r in star.ray_set.iter().filter(|r| !tau.ray_indices.contains(r)) {
            let image = projection.mul_vec(&self.rays[r])?;
            let p = primitive(&image)?;
            if let Some(k) = rays.iter().position(|x| x == &p) {
                warnings.push(format!(
                    "rays {} and {} have the same primitive image; kept as distinct quotient rays",
                    ray_origin[k], r
                ));
            }
            rays.push(p);
            ray_origin.push(r);
        }
        let cones = star
            .cones
            .iter()
            .map(|s| {
                s.ray_indices
                    .iter()
                    .filter_map(|r| ray_origin.iter().position(|o| o == r))
                    .collect()
            })
            .collect();
        Ok(QuotientFan {
            tau,
            quotient_rank,
            projection,
            rays,
            ray_origin,
            cones,
            warnings,
        })
    }

    /// Transforms all rays by a unimodular matrix, keeping the combinatorics.
    pub fn apply_unimodular(&self, u: &IntMatrix) -> Result<Fan, FanError> {
        if u.rows() != self.rank || u.cols() != self.rank || !u.is_unimodular() {
            return Err(FanError::NotUnimodular(self.rank));
        }
        let mut rays = Vec::with_capacity(self.rays.len());
        for v in &self.rays {
            let w = u.mul_vec(v)?;
            debug_assert!(is_primitive(&w));
            rays.push(w);
        }
        Ok(Fan {
            rays,
            ..self.clone()
        })
    }
}

fn ridge_graph_connected(maximal: &[&ConeRef], n: usize) -> bool {
    if maximal.is_empty() {
        return false;
    }
    let mut seen = vec![false; maximal.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..maximal.len() {
            if seen[j] {
                continue;
            }
            let shared = maximal[i]
                .ray_indices
                .iter()
                .filter(|x| maximal[j].ray_indices.contains(x))
                .count();
            if shared + 1 == n {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Cones containing a given cone, plus the union of their rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub cones: Vec<ConeRef>,
    pub ray_set: Vec<usize>,
}

/// Localized fan of a star in the quotient lattice `N(tau)`.
#[derive(Debug, Clone)]
pub struct QuotientFan {
    pub tau: ConeRef,
    pub quotient_rank: usize,
    /// `(n - dim tau) x n`, vanishing exactly on the saturated span of tau.
    pub projection: IntMatrix,
    /// Primitive images of the star rays outside tau.
    pub rays: Vec<IntVector>,
    /// Base-fan index of each quotient ray.
    pub ray_origin: Vec<usize>,
    /// Images of the star cones as quotient ray index sets.
    pub cones: Vec<Vec<usize>>,
    pub warnings: Vec<String>,
}

impl QuotientFan {
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.quotient_rank, &self.rays).expect("projected ray lengths")
    }
}

/// Checks whether `point` lies in a cone of a simplicial fan.
pub fn cone_contains(fan: &Fan, cone: &ConeRef, point: &[BigInt]) -> bool {
    in_simplicial_cone(&fan.ray_vectors_of(&cone.ray_indices), point)
}
