//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line, even when run in a batch.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use fanlat::corpus::{self, CatalogEntry};
use fanlat::filtration::{self, Depth};
use fanlat::intlin::{self, int_vector};
use fanlat::io::FanFile;
use fanlat::lattices;
use fanlat::refine;
use fanlat::SupportPolicy::{Exclusive, Inclusive};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::BruteForce;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let elapsed = start.elapsed();
    ensure(elapsed < limit, format!("{what} took {elapsed:?}, limit {limit:?}"))?;
    Ok(elapsed)
}

fn complete_entries() -> Vec<CatalogEntry> {
    corpus::catalog().into_iter().filter(|e| e.known.complete).collect()
}

fn entry(name: &str) -> CatalogEntry {
    corpus::entry(name).expect("catalog entry")
}

fn p2_relation_and_depth() -> Outcome {
    let start = Instant::now();
    let fan = entry("p2").fan;
    let basis = lattices::rel_lattice(&fan).sublattice.basis_vectors();
    let depth = filtration::depth(&fan, &int_vector(&[1, 1, 1]), Inclusive).map_err(|e| e.to_string())?;
    let elapsed = within(start, Duration::from_millis(100), "p2")?;
    ensure(basis == vec![int_vector(&[1, 1, 1])], format!("basis {basis:?}"))?;
    ensure(depth == Depth::Level(1), format!("inclusive depth {depth}"))?;
    Ok(format!("basis [(1,1,1)], inclusive depth 1, {elapsed:?}"))
}

fn p2xp1_depths_with_oracle() -> Outcome {
    let start = Instant::now();
    let fan = entry("p2xp1").fan;
    let r1 = int_vector(&[1, 1, 1, 0, 0]);
    let r2 = int_vector(&[0, 0, 0, 1, 1]);
    let rel = lattices::rel_lattice(&fan).sublattice;
    let expected = intlin::Sublattice::from_vectors(5, vec![r1.clone(), r2.clone()]).unwrap();
    ensure(rel.rank() == 2, "relation rank is not 2")?;
    ensure(intlin::lattice_equal(&rel, &expected).unwrap(), "basis does not span r1, r2")?;

    let depth = |r, p| filtration::depth(&fan, r, p).map_err(|e| e.to_string());
    ensure(depth(&r1, Exclusive)? == Depth::Level(2), "exclusive depth of r1 is not 2")?;
    ensure(depth(&r2, Exclusive)? == Depth::Level(1), "exclusive depth of r2 is not 1")?;
    ensure(depth(&r1, Inclusive)? == Depth::Level(1), "inclusive depth of r1 is not 1")?;
    let flags = filtration::policy_discrepancies(&fan, &[r1.clone(), r2.clone()]).map_err(|e| e.to_string())?;
    ensure(
        flags.len() == 1
            && flags[0].relation == r1
            && flags[0].inclusive == Depth::Level(1)
            && flags[0].exclusive == Depth::Level(2),
        format!("discrepancy flags {flags:?}"),
    )?;

    let oracle = BruteForce::new(&fan);
    let (v1, v2) = ([1, 1, 1, 0, 0], [0, 0, 0, 1, 1]);
    // (relation, drop own rays, depth): witness at depth, none below.
    for (r, drop_own, k) in [(v1, true, 2), (v2, true, 1), (v1, false, 1)] {
        ensure(oracle.member(k, drop_own, &r, 3), format!("oracle: no witness for {r:?} at level {k}"))?;
        ensure(
            !oracle.member(k - 1, drop_own, &r, 3),
            format!("oracle: witness for {r:?} at level {}", k - 1),
        )?;
    }
    let elapsed = within(start, Duration::from_secs(1), "p2xp1")?;
    Ok(format!(
        "exclusive depths (2, 1), inclusive depth of r1 = 1 flagged, oracle (bound 3) agrees, {elapsed:?}"
    ))
}

fn local_generation_on_complete_fans() -> Outcome {
    let mut names = Vec::new();
    for e in complete_entries() {
        let start = Instant::now();
        let profile = filtration::filtration(&e.fan, Inclusive).map_err(|err| err.to_string())?;
        let n = e.fan.rank();
        let below = intlin::lattice_equal(&profile.levels[n - 1], &profile.relations).unwrap();
        let top = intlin::lattice_equal(&profile.levels[n], &profile.relations).unwrap();
        let report = filtration::check_generation(&e.fan, Inclusive).map_err(|err| err.to_string())?;
        ensure(below && top, format!("{}: F_(n-1) = L_rel {below}, F_n = L_rel {top}", e.name))?;
        ensure(!report.violates_local_generation, format!("{}: reported as violating", e.name))?;
        within(start, Duration::from_secs(1), e.name)?;
        names.push(e.name);
    }
    Ok(format!("F_(n-1) = F_n = L_rel on {}", names.join(", ")))
}

fn decompositions_verify() -> Outcome {
    let mut count = 0;
    for e in complete_entries() {
        for r in e.relation_basis() {
            let d = filtration::local_decompose(&e.fan, &r).map_err(|err| format!("{}: {err}", e.name))?;
            // Independent recheck of the three properties.
            let mut total = vec![num_bigint::BigInt::zero(); e.fan.num_rays()];
            for (ray, piece) in &d.pieces {
                let star = e.fan.star(e.fan.cone(&[*ray]).unwrap()).unwrap().ray_set;
                for (i, x) in piece.iter().enumerate() {
                    total[i] += x;
                    ensure(x.is_zero() || star.contains(&i), format!("{}: support outside star", e.name))?;
                }
                let image = e.fan.ray_matrix().mul_vec(piece).unwrap();
                ensure(image.iter().all(Zero::is_zero), format!("{}: piece is not a relation", e.name))?;
            }
            ensure(total == r, format!("{}: pieces do not sum to {r:?}", e.name))?;
            ensure(d.check(&e.fan).unwrap().passed(), format!("{}: self-check failed", e.name))?;
            count += 1;
        }
    }
    Ok(format!("{count} basis relations decomposed and verified"))
}

fn exclusive_counterpoint_on_p3() -> Outcome {
    let fan = entry("p3").fan;
    let profile = filtration::filtration(&fan, Exclusive).map_err(|e| e.to_string())?;
    let top = profile.levels[fan.rank()].rank();
    let rel = profile.relations.rank();
    let report = filtration::check_generation(&fan, Exclusive).map_err(|e| e.to_string())?;
    ensure(top == 0 && rel == 1, format!("F_n rank {top}, L_rel rank {rel}"))?;
    ensure(report.violates_local_generation, "exclusive policy not reported as violating")?;
    Ok("exclusive F_n rank 0 vs L_rel rank 1, flagged as violating".into())
}

fn unimodular_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    for e in corpus::catalog() {
        let summary = |fan: &fanlat::Fan| -> Result<_, String> {
            let basis = lattices::rel_lattice(fan).sublattice.basis_vectors();
            let mut depths = Vec::new();
            for p in [Inclusive, Exclusive] {
                let profile = filtration::filtration(fan, p).map_err(|err| err.to_string())?;
                depths.push(profile.level_ranks());
                for r in &basis {
                    depths.push(vec![match profile.depth_of(r).map_err(|err| err.to_string())? {
                        Depth::Level(k) => k,
                        Depth::Unreachable => usize::MAX,
                    }]);
                }
            }
            Ok((basis, depths))
        };
        let reference = summary(&e.fan)?;
        for trial in 0..20 {
            let u = common::random_unimodular(&mut rng, e.fan.rank(), 12);
            let moved = common::transformed(&e.fan, &u);
            ensure(
                summary(&moved)? == reference,
                format!("{} changed under transform {trial}", e.name),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} transformed fans with identical bases and depths"))
}

fn refinement_injection() -> Outcome {
    let catalog = corpus::catalog();
    let seed = 2024;
    let mut done = 0;
    for trial in 0..100 {
        let e = &catalog[trial % catalog.len()];
        let (cone, w) = refine::random_subdivision_site(&e.fan, seed, trial)
            .ok_or_else(|| format!("{}: no subdivision site in trial {trial}", e.name))?;
        let after = refine::stellar_subdivide(&e.fan, &cone, &w).map_err(|err| err.to_string())?;
        let before_rank = lattices::rel_lattice(&e.fan).sublattice.rank();
        let after_rank = lattices::rel_lattice(&after).sublattice.rank();
        let added = after.num_rays() - e.fan.num_rays();
        ensure(
            after_rank == before_rank + added,
            format!("{} trial {trial}: rank {before_rank} -> {after_rank}", e.name),
        )?;
        let v = after.ray_matrix();
        for r in e.relation_basis() {
            let padded = refine::refinement_injection(&e.fan, &after, &r).map_err(|err| err.to_string())?;
            ensure(
                v.mul_vec(&padded).unwrap().iter().all(Zero::is_zero),
                format!("{} trial {trial}: padded relation not annihilated", e.name),
            )?;
        }
        done += 1;
    }
    Ok(format!("{done} subdivisions: injections annihilate, relation rank grows by the added rays"))
}

fn artifact_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
}

fn conjecture_scan() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut violations = 0;
    for name in ["p2", "p2xp1"] {
        let fan = entry(name).fan;
        let scan = refine::conjecture_scan(&fan, Inclusive, 100, 7);
        ensure(scan.traces.len() == 100, format!("{name}: only {} trials ran", scan.traces.len()))?;
        let found = scan.violation_count();
        if found > 0 {
            let records: Vec<_> = scan
                .traces
                .iter()
                .filter(|t| t.violations().next().is_some())
                .map(|t| {
                    serde_json::json!({
                        "trial": t.trial,
                        "seed": scan.seed,
                        "subdivided_cone": t.subdivided_cone.ray_indices,
                        "new_ray": t.new_ray.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "fan_after": FanFile::from_fan(&t.after),
                        "records": t.depth_records,
                    })
                })
                .collect();
            let path = artifact_dir().join(format!("counterexample-{name}.json"));
            std::fs::write(&path, serde_json::to_string_pretty(&records).unwrap()).unwrap();
            lines.push(format!("{name}: {found} violations written to {}", path.display()));
        }
        violations += found;
    }
    let elapsed = within(start, Duration::from_secs(30), "scan")?;
    ensure(violations == 0, lines.join("; "))?;
    Ok(format!("200 inclusive trials on p2 and p2xp1, 0 violations, {elapsed:?}"))
}

fn intlin_properties() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..500 {
        let m = common::random_matrix(&mut rng, 6, 9);
        common::check_all_contracts(&m).map_err(|e| format!("matrix {i} {m:?}: {e}"))?;
    }
    let elapsed = within(start, Duration::from_secs(5), "property suite")?;
    Ok(format!("500 random matrices satisfy HNF/SNF/kernel/saturation contracts, {elapsed:?}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("p2 relation lattice and depth", p2_relation_and_depth),
        ("p2xp1 depths, policy flag and oracle", p2xp1_depths_with_oracle),
        ("local generation on complete fans", local_generation_on_complete_fans),
        ("constructive decomposition", decompositions_verify),
        ("exclusive-policy counterpoint on p3", exclusive_counterpoint_on_p3),
        ("invariance under unimodular transforms", unimodular_invariance),
        ("refinement injection", refinement_injection),
        ("refinement monotonicity scan", conjecture_scan),
        ("intlin property suite", intlin_properties),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
