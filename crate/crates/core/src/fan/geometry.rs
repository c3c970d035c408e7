//! Rational helpers for cone containment and pairwise-intersection checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::intlin::IntVector;

/// Solves `sum_j x_j * columns[j] = target` over the rationals.
///
/// Returns one solution (the unique one when the columns are independent).
pub(crate) fn solve_in_span(columns: &[IntVector], target: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = target.len();
    let k = columns.len();
    // augmented n x (k + 1)
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = columns
                .iter()
                .map(|c| BigRational::from_integer(c[i].clone()))
                .collect();
            row.push(BigRational::from_integer(target[i].clone()));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row[c..=k].iter_mut().zip(&pivot_row[c..=k]) {
                    *x -= &f * p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == n {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = a[i][k].clone();
    }
    Some(x)
}

/// Is `point` in the cone spanned by linearly independent `generators`?
pub(crate) fn in_simplicial_cone(generators: &[IntVector], point: &[BigInt]) -> bool {
    match solve_in_span(generators, point) {
        Some(x) => x.iter().all(|c| !c.is_negative()),
        None => false,
    }
}

/// Coefficients of `point` in the independent `generators`, if it lies in
/// their relative interior (all coefficients strictly positive).
pub(crate) fn relative_interior_coefficients(
    generators: &[IntVector],
    point: &[BigInt],
) -> Option<Vec<BigRational>> {
    let x = solve_in_span(generators, point)?;
    x.iter().all(|c| c.is_positive()).then_some(x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TooLarge;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Constraint {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
}

impl Constraint {
    // Scale so the first nonzero coefficient has absolute value one; keeps
    // duplicate detection effective during elimination.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in self.coeffs.iter_mut() {
                *c /= &lead;
            }
            self.rhs /= lead;
        }
        self
    }
}

/// Feasibility of `{ z >= 0 : eq_rows * z = eq_rhs }` by Gaussian
/// substitution followed by Fourier-Motzkin elimination. Aborts when the
/// number of inequalities exceeds `limit`.
pub(crate) fn fm_feasible(
    num_vars: usize,
    eq_rows: Vec<Vec<BigRational>>,
    eq_rhs: Vec<BigRational>,
    limit: usize,
) -> Result<bool, TooLarge> {
    // inequalities: coeffs . z >= rhs
    let mut ineqs: Vec<Constraint> = (0..num_vars)
        .map(|i| {
            let mut coeffs = vec![BigRational::zero(); num_vars];
            coeffs[i] = BigRational::one();
            Constraint {
                coeffs,
                rhs: BigRational::zero(),
            }
        })
        .collect();
    let mut eqs: Vec<Constraint> = eq_rows
        .into_iter()
        .zip(eq_rhs)
        .map(|(coeffs, rhs)| Constraint { coeffs, rhs })
        .collect();

    let substitute = |target: &mut Constraint, eq: &Constraint, var: usize| {
        let f = target.coeffs[var].clone();
        if f.is_zero() {
            return;
        }
        for j in 0..num_vars {
            let delta = &f * &eq.coeffs[j];
            target.coeffs[j] -= delta;
        }
        let delta = &f * &eq.rhs;
        target.rhs -= delta;
    };

    let mut eliminated = vec![false; num_vars];
    while let Some(eq) = eqs.pop() {
        let Some(var) = (0..num_vars).find(|&j| !eq.coeffs[j].is_zero()) else {
            if !eq.rhs.is_zero() {
                return Ok(false);
            }
            continue;
        };
        let inv = eq.coeffs[var].recip();
        let eq = Constraint {
            coeffs: eq.coeffs.iter().map(|c| c * &inv).collect(),
            rhs: &eq.rhs * &inv,
        };
        for other in eqs.iter_mut() {
            substitute(other, &eq, var);
        }
        for ineq in ineqs.iter_mut() {
            substitute(ineq, &eq, var);
        }
        eliminated[var] = true;
    }

    for var in (0..num_vars).filter(|&v| !eliminated[v]) {
        let mut keep = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for c in ineqs {
            if c.coeffs[var].is_positive() {
                pos.push(c);
            } else if c.coeffs[var].is_negative() {
                neg.push(c);
            } else {
                keep.push(c);
            }
        }
        if keep.len() + pos.len() * neg.len() > limit {
            return Err(TooLarge);
        }
        for p in &pos {
            for q in &neg {
                let a = p.coeffs[var].clone();
                let b = -q.coeffs[var].clone();
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(x, y)| x * &b + y * &a)
                    .collect();
                keep.push(
                    Constraint {
                        coeffs,
                        rhs: &p.rhs * &b + &q.rhs * &a,
                    }
                    .normalized(),
                );
            }
        }
        keep.sort();
        keep.dedup();
        ineqs = keep;
    }
    Ok(ineqs.iter().all(|c| !c.rhs.is_positive()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::int_vector;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn span_solve() {
        let cols = vec![int_vector(&[1, 0, 1]), int_vector(&[0, 1, 1])];
        let x = solve_in_span(&cols, &int_vector(&[2, 3, 5])).unwrap();
        assert_eq!(x, vec![q(2), q(3)]);
        assert!(solve_in_span(&cols, &int_vector(&[1, 1, 0])).is_none());
    }

    #[test]
    fn cone_containment() {
        let gens = vec![int_vector(&[1, 0]), int_vector(&[1, 2])];
        assert!(in_simplicial_cone(&gens, &int_vector(&[1, 1])));
        assert!(in_simplicial_cone(&gens, &int_vector(&[1, 0])));
        assert!(!in_simplicial_cone(&gens, &int_vector(&[0, 1])));
        assert!(relative_interior_coefficients(&gens, &int_vector(&[1, 0])).is_none());
        assert!(relative_interior_coefficients(&gens, &int_vector(&[2, 1])).is_some());
    }

    #[test]
    fn fm_small_systems() {
        // z0 + z1 = 1, z0 - z1 = 3 -> z1 = -1 infeasible
        let rows = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(fm_feasible(2, rows, vec![q(1), q(3)], 100), Ok(false));
        // z0 - z1 = 0, z0 + z1 + z2 = 1 feasible
        let rows = vec![vec![q(1), q(-1), q(0)], vec![q(1), q(1), q(1)]];
        assert_eq!(fm_feasible(3, rows, vec![q(0), q(1)], 100), Ok(true));
        // z0 + z1 = -1 infeasible, needs FM rather than substitution alone
        let rows = vec![vec![q(1), q(1)]];
        assert_eq!(fm_feasible(2, rows, vec![q(-1)], 100), Ok(false));
    }
}
