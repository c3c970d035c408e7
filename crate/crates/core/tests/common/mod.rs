//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use fanlat::intlin::{self, IntMatrix};
use fanlat::{build_fan, Fan, FanOptions, IntVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

pub fn random_matrix<R: Rng>(rng: &mut R, max_dim: usize, max_entry: i64) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let data: Vec<IntVector> = (0..rows)
        .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-max_entry..=max_entry))).collect())
        .collect();
    IntMatrix::from_rows(cols, data).unwrap()
}

/// Product of random elementary operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let c = BigInt::from(rng.gen_range(-2i64..=2));
                for col in 0..n {
                    let v = u.get(i, col) + &c * u.get(j, col);
                    u.set(i, col, v);
                }
            }
            1 => {
                for col in 0..n {
                    let v = -u.get(i, col);
                    u.set(i, col, v);
                }
            }
            _ if n > 1 => {
                let j = rng.gen_range(0..n);
                for col in 0..n {
                    let a = u.get(i, col).clone();
                    let b = u.get(j, col).clone();
                    u.set(i, col, b);
                    u.set(j, col, a);
                }
            }
            _ => {}
        }
    }
    u
}

pub fn check_hnf_contract(m: &IntMatrix) -> Result<(), String> {
    let d = intlin::hnf(m);
    if d.u.rows() != m.rows() || d.u.cols() != m.rows() {
        return Err("HNF transform has the wrong shape".into());
    }
    if d.h.rows() != m.rows() || d.h.cols() != m.cols() {
        return Err("HNF has the wrong shape".into());
    }
    if !d.u.is_unimodular() {
        return Err("HNF transform is not unimodular".into());
    }
    if &d.u * m != d.h {
        return Err("u * m != h".into());
    }
    if !intlin::is_hnf(&d.h) {
        return Err("h is not in Hermite normal form".into());
    }
    if d.rank() != m.rank() {
        return Err("HNF rank differs from matrix rank".into());
    }
    Ok(())
}

pub fn check_snf_contract(m: &IntMatrix) -> Result<(), String> {
    let d = intlin::snf(m);
    if !d.u.is_unimodular() || !d.w.is_unimodular() {
        return Err("SNF transforms are not unimodular".into());
    }
    if d.u.rows() != m.rows() || d.w.rows() != m.cols() {
        return Err("SNF transforms have the wrong shape".into());
    }
    if &(&d.u * m) * &d.w != d.s {
        return Err("u * m * w != s".into());
    }
    for i in 0..d.s.rows() {
        for j in 0..d.s.cols() {
            if i != j && !d.s.get(i, j).is_zero() {
                return Err("SNF is not diagonal".into());
            }
        }
    }
    let diag = d.diagonal();
    if diag.iter().any(Signed::is_negative) {
        return Err("negative invariant factor".into());
    }
    for pair in diag.windows(2) {
        let divides = if pair[0].is_zero() {
            pair[1].is_zero()
        } else {
            pair[1].is_multiple_of(&pair[0])
        };
        if !divides {
            return Err(format!("divisibility chain broken: {} then {}", pair[0], pair[1]));
        }
    }
    if d.rank() != m.rank() {
        return Err("SNF rank differs from matrix rank".into());
    }
    Ok(())
}

pub fn check_kernel(m: &IntMatrix) -> Result<(), String> {
    let k = intlin::integer_kernel(m);
    for v in k.basis_vectors() {
        if !m.mul_vec(&v).unwrap().iter().all(Zero::is_zero) {
            return Err("kernel vector not annihilated".into());
        }
    }
    if k.rank() + m.rank() != m.cols() {
        return Err("rank-nullity fails".into());
    }
    if !intlin::lattice_equal(&intlin::saturation(&k), &k).unwrap() {
        return Err("kernel is not saturated".into());
    }
    Ok(())
}

pub fn check_saturation(m: &IntMatrix) -> Result<(), String> {
    let l = intlin::Sublattice::from_generators(m);
    let s = intlin::saturation(&l);
    if !l.is_sublattice_of(&s).unwrap() {
        return Err("lattice not inside its saturation".into());
    }
    if s.rank() != l.rank() {
        return Err("saturation changed the rank".into());
    }
    if !intlin::lattice_equal(&intlin::saturation(&s), &s).unwrap() {
        return Err("saturation is not idempotent".into());
    }
    Ok(())
}

pub fn check_all_contracts(m: &IntMatrix) -> Result<(), String> {
    check_hnf_contract(m)?;
    check_snf_contract(m)?;
    check_kernel(m)?;
    check_saturation(m)
}

/// Rebuilds `fan` with every ray multiplied by `u`, revalidating from scratch.
pub fn transformed(fan: &Fan, u: &IntMatrix) -> Fan {
    let rays = fan.rays().iter().map(|v| u.mul_vec(v).unwrap()).collect();
    let maximal = fan.maximal_cones().iter().map(|c| c.ray_indices.clone()).collect();
    build_fan(fan.rank(), rays, maximal, FanOptions::default()).unwrap()
}

/// Brute-force filtration membership, computed from the raw rays and
/// maximal cones of a simplicial fan without the library's lattice code.
///
/// Decides whether `r` is a sum of relations, one per star, each with
/// entries in `[-bound, bound]` and supported on the star of a nonzero cone
/// of codimension at most `level` (optionally dropping the cone's own rays).
pub struct BruteForce {
    rank: usize,
    rays: Vec<Vec<i64>>,
    maximal: Vec<BTreeSet<usize>>,
}

impl BruteForce {
    pub fn new(fan: &Fan) -> Self {
        BruteForce {
            rank: fan.rank(),
            rays: fan
                .rays()
                .iter()
                .map(|v| v.iter().map(|x| i64::try_from(x).unwrap()).collect())
                .collect(),
            maximal: fan
                .maximal_cones()
                .iter()
                .map(|c| c.ray_indices.iter().copied().collect())
                .collect(),
        }
    }

    fn faces(&self) -> BTreeSet<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for m in &self.maximal {
            let v: Vec<usize> = m.iter().copied().collect();
            for mask in 1u32..(1 << v.len()) {
                out.insert((0..v.len()).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect());
            }
        }
        out
    }

    fn star_support(&self, tau: &BTreeSet<usize>, drop_own: bool) -> Vec<usize> {
        let mut rays = BTreeSet::new();
        for m in self.maximal.iter().filter(|m| tau.is_subset(m)) {
            rays.extend(m.iter().copied());
        }
        rays.into_iter().filter(|r| !(drop_own && tau.contains(r))).collect()
    }

    fn is_relation(&self, x: &[i64]) -> bool {
        (0..self.rank).all(|i| x.iter().zip(&self.rays).map(|(c, v)| c * v[i]).sum::<i64>() == 0)
    }

    fn small_relations(&self, support: &[usize], bound: i64) -> Vec<Vec<i64>> {
        let m = self.rays.len();
        let width = (2 * bound + 1) as usize;
        let mut out = Vec::new();
        for code in 0..width.pow(support.len() as u32) {
            let mut x = vec![0i64; m];
            let mut c = code;
            for &s in support {
                x[s] = (c % width) as i64 - bound;
                c /= width;
            }
            if x.iter().any(|&v| v != 0) && self.is_relation(&x) {
                out.push(x);
            }
        }
        out
    }

    pub fn member(&self, level: usize, drop_own: bool, r: &[i64], bound: i64) -> bool {
        let box_bound = r.iter().map(|x| x.abs()).max().unwrap_or(0).max(bound);
        let supports: BTreeSet<Vec<usize>> = self
            .faces()
            .iter()
            .filter(|tau| self.rank - tau.len() <= level)
            .map(|tau| self.star_support(tau, drop_own))
            .collect();
        let mut reachable: HashSet<Vec<i64>> = HashSet::from([vec![0; self.rays.len()]]);
        for support in supports {
            let moves = self.small_relations(&support, bound);
            let mut next = reachable.clone();
            for state in &reachable {
                for mv in &moves {
                    let sum: Vec<i64> = state.iter().zip(mv).map(|(a, b)| a + b).collect();
                    if sum.iter().all(|x| x.abs() <= box_bound) {
                        next.insert(sum);
                    }
                }
            }
            reachable = next;
        }
        reachable.contains(r)
    }
}

