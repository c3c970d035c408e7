mod common;

use fanlat::corpus;
use fanlat::filtration;
use fanlat::intlin::{self, IntMatrix, Sublattice};
use fanlat::{lattices, IntVector, SupportPolicy};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(max_dim: usize, entry: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-entry..=entry, c), r).prop_map(move |rows| {
            IntMatrix::from_rows(c, rows.iter().map(|row| intlin::int_vector(row)).collect()).unwrap()
        })
    })
}

fn sublattice(ambient: usize) -> impl Strategy<Value = Sublattice> {
    proptest::collection::vec(proptest::collection::vec(-6i64..=6, ambient), 0..4).prop_map(move |rows| {
        let rows: Vec<IntVector> = rows.iter().map(|r| intlin::int_vector(r)).collect();
        Sublattice::from_vectors(ambient, rows).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn matrix_contracts(m in matrix(6, 9)) {
        prop_assert_eq!(common::check_all_contracts(&m), Ok(()));
    }

    #[test]
    fn hnf_is_canonical(m in matrix(5, 9), steps in 0usize..20, seed in any::<u64>()) {
        // Row operations do not change the row lattice, hence not the HNF.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_unimodular(&mut rng, m.rows(), steps);
        prop_assert_eq!(intlin::hnf(&(&u * &m)).h, intlin::hnf(&m).h);
    }

    #[test]
    fn membership_of_combinations(m in matrix(4, 9), coeffs in proptest::collection::vec(-5i64..=5, 4)) {
        let l = Sublattice::from_generators(&m);
        let c: Vec<BigInt> = coeffs.iter().take(m.rows()).map(|&x| BigInt::from(x)).collect();
        let v = m.transpose().mul_vec(&c).unwrap();
        prop_assert!(l.contains(&v).unwrap());
        let solved = intlin::solve_combination(&m, &v).unwrap().expect("solvable");
        prop_assert_eq!(m.transpose().mul_vec(&solved).unwrap(), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lattice_sum_laws(a in sublattice(4), b in sublattice(4), c in sublattice(4)) {
        let sum = |x: &Sublattice, y: &Sublattice| intlin::lattice_sum(4, &[x.clone(), y.clone()]).unwrap();
        prop_assert_eq!(sum(&a, &b), sum(&b, &a));
        prop_assert_eq!(sum(&sum(&a, &b), &c), sum(&a, &sum(&b, &c)));
        prop_assert_eq!(sum(&a, &a), a.clone());
        prop_assert!(a.is_sublattice_of(&sum(&a, &b)).unwrap());
    }

    #[test]
    fn catalog_invariance(index in 0usize..7, seed in any::<u64>(), flip in any::<bool>()) {
        let e = &corpus::catalog()[index];
        let n = e.fan.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = if flip {
            let mut u = IntMatrix::identity(n);
            for i in 0..n {
                u.set(i, i, BigInt::from(-1));
            }
            u
        } else {
            common::random_unimodular(&mut rng, n, 10)
        };
        let moved = common::transformed(&e.fan, &u);
        prop_assert_eq!(
            lattices::rel_lattice(&moved).sublattice,
            lattices::rel_lattice(&e.fan).sublattice
        );
        for policy in SupportPolicy::ALL {
            let a = filtration::filtration(&e.fan, policy).unwrap();
            let b = filtration::filtration(&moved, policy).unwrap();
            prop_assert_eq!(a.levels, b.levels);
        }
    }
}

#[test]
fn filtration_levels_form_a_chain() {
    for e in corpus::catalog() {
        for policy in SupportPolicy::ALL {
            let profile = filtration::filtration(&e.fan, policy).unwrap();
            assert_eq!(profile.levels.len(), e.fan.rank() + 1);
            assert!(profile.levels[0].is_zero(), "{}: F_0 is not zero", e.name);
            for pair in profile.levels.windows(2) {
                assert!(pair[0].is_sublattice_of(&pair[1]).unwrap(), "{} {policy}", e.name);
            }
            for level in &profile.levels {
                assert!(level.is_sublattice_of(&profile.relations).unwrap());
            }
        }
    }
}

#[test]
fn inclusive_contains_exclusive() {
    for e in corpus::catalog() {
        let inc = filtration::filtration(&e.fan, SupportPolicy::Inclusive).unwrap();
        let exc = filtration::filtration(&e.fan, SupportPolicy::Exclusive).unwrap();
        for (a, b) in exc.levels.iter().zip(&inc.levels) {
            assert!(a.is_sublattice_of(b).unwrap(), "{}", e.name);
        }
    }
}

#[test]
fn brute_force_agrees_with_depths() {
    for name in ["p2", "p1xp1", "p3", "blowup_p2"] {
        let e = corpus::entry(name).unwrap();
        let oracle = common::BruteForce::new(&e.fan);
        for (policy, drop_own) in [(SupportPolicy::Inclusive, false), (SupportPolicy::Exclusive, true)] {
            let profile = filtration::filtration(&e.fan, policy).unwrap();
            for r in e.relation_basis() {
                let small: Vec<i64> = r.iter().map(|x| i64::try_from(x).unwrap()).collect();
                let depth = profile.depth_of(&r).unwrap();
                for k in 0..=e.fan.rank() {
                    let expected = matches!(depth, filtration::Depth::Level(d) if d <= k);
                    assert_eq!(oracle.member(k, drop_own, &small, 2), expected, "{name} {policy} level {k}");
                }
            }
        }
    }
}
