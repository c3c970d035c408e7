//! Brute-force confirmation of filtration membership with bounded
//! coefficients. Independent of the HNF machinery: small relations on each
//! star are enumerated directly and combined by a reachability search.

use std::collections::{BTreeSet, HashSet};

use fanlat::{lattices, Depth, Fan, SupportPolicy};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::report::OracleSection;

const ENUMERATION_LIMIT: u64 = 2_000_000;
const STATE_LIMIT: usize = 2_000_000;

/// Nonzero vectors with entries in `[-bound, bound]` on `support` that the
/// ray map sends to zero.
fn small_relations(fan: &Fan, support: &[usize], bound: i64) -> Option<Vec<Vec<i64>>> {
    let width = (2 * bound + 1) as u64;
    if width.checked_pow(support.len() as u32)? > ENUMERATION_LIMIT {
        return None;
    }
    let m = fan.num_rays();
    let mut out = Vec::new();
    let mut coeffs = vec![-bound; support.len()];
    loop {
        if coeffs.iter().any(|&c| c != 0) {
            let mut x = vec![BigInt::zero(); m];
            for (&s, &c) in support.iter().zip(&coeffs) {
                x[s] = BigInt::from(c);
            }
            if fan.apply_ray_map(&x).ok()?.iter().all(Zero::is_zero) {
                out.push(x.iter().map(|v| i64::try_from(v).unwrap()).collect());
            }
        }
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return Some(out);
            }
            if coeffs[i] < bound {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

/// Is `r` a sum of bounded relations, one from each distinct star support of
/// a nonzero cone of codimension at most `level`? `None` if the search is too
/// large to run.
pub fn bounded_member(fan: &Fan, policy: SupportPolicy, level: usize, r: &[BigInt], bound: i64) -> Option<bool> {
    let target: Vec<i64> = r.iter().map(|x| i64::try_from(x).ok()).collect::<Option<_>>()?;
    let box_bound = r
        .iter()
        .map(|x| x.abs())
        .max()
        .and_then(|x| i64::try_from(x).ok())
        .unwrap_or(0)
        .max(bound);
    let mut supports = BTreeSet::new();
    for cone in fan.cones() {
        if cone.is_zero() || cone.codim > level {
            continue;
        }
        supports.insert(lattices::star_support(fan, cone, policy).ok()?);
    }
    let mut reachable: HashSet<Vec<i64>> = HashSet::from([vec![0; fan.num_rays()]]);
    for support in supports {
        let moves = small_relations(fan, &support, bound)?;
        let mut next = reachable.clone();
        for state in &reachable {
            for mv in &moves {
                let sum: Vec<i64> = state.iter().zip(mv).map(|(a, b)| a + b).collect();
                if sum.iter().all(|x| x.abs() <= box_bound) {
                    next.insert(sum);
                }
            }
            if next.len() > STATE_LIMIT {
                return None;
            }
        }
        reachable = next;
    }
    Some(reachable.contains(&target))
}

/// Bounded evidence for a computed depth: a witness at that level and none
/// one level below.
pub fn confirm_depth(fan: &Fan, policy: SupportPolicy, r: &[BigInt], depth: Depth, bound: u32) -> OracleSection {
    let b = i64::from(bound);
    let mut notes = Vec::new();
    let (witness_at_depth, none_below) = match depth {
        Depth::Level(k) => {
            let at = bounded_member(fan, policy, k, r, b);
            let below = if k == 0 {
                Some(true)
            } else {
                bounded_member(fan, policy, k - 1, r, b).map(|found| !found)
            };
            (at, below)
        }
        Depth::Unreachable => (None, bounded_member(fan, policy, fan.rank(), r, b).map(|found| !found)),
    };
    if witness_at_depth == Some(false) {
        notes.push("no witness within the coefficient bound; try a larger --max-coeff".to_string());
    }
    if none_below.is_none() || (matches!(depth, Depth::Level(_)) && witness_at_depth.is_none()) {
        notes.push("search space too large for the brute-force check".to_string());
    }
    OracleSection {
        bound,
        witness_at_depth,
        none_below,
        notes,
    }
}
