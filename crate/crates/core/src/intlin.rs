//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Sublattices of
//! `Z^n` are kept as row-style Hermite normal form bases, which makes the
//! basis canonical: two sublattices are equal exactly when their bases are
//! bit-identical.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type IntVector = Vec<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("sublattices live in different ambient lattices ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Converts a slice of machine integers to an [`IntVector`].
pub fn int_vector<T: Into<BigInt> + Copy>(v: &[T]) -> IntVector {
    v.iter().map(|&x| x.into()).collect()
}

/// Dense row-major matrix of big integers.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from big-integer rows. `cols` is needed to give an
    /// empty row list a shape.
    pub fn from_rows(cols: usize, rows: Vec<IntVector>) -> Result<Self, LinAlgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinAlgError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(IntMatrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers. Panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| int_vector(r)).collect())
            .expect("ragged rows")
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[IntVector]) -> Result<Self, LinAlgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(LinAlgError::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, columns.len());
        for i in 0..self.rows {
            for (k, &j) in columns.iter().enumerate() {
                m.data[i * columns.len() + k] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<Self, LinAlgError> {
        if self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Computes `self * v`.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<IntVector, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn rank(&self) -> usize {
        hnf(self).rank()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.determinant(), Ok(d) if d.abs().is_one())
    }

    // row_a <- p*row_a + q*row_b ; row_b <- r*row_a + s*row_b
    fn combine_rows(&mut self, a: usize, b: usize, coeffs: [&BigInt; 4]) {
        let [p, q, r, s] = coeffs;
        for j in 0..self.cols {
            let x = self.get(a, j).clone();
            let y = self.get(b, j).clone();
            self.set(a, j, p * &x + q * &y);
            self.set(b, j, r * &x + s * &y);
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, coeffs: [&BigInt; 4]) {
        let [p, q, r, s] = coeffs;
        for i in 0..self.rows {
            let x = self.get(i, a).clone();
            let y = self.get(i, b).clone();
            self.set(i, a, p * &x + q * &y);
            self.set(i, b, r * &x + s * &y);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j);
            self.set(a, j, v);
        }
    }

    // row_a <- row_a - factor * row_b
    fn sub_row_multiple(&mut self, a: usize, b: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(a, j) - factor * self.get(b, j);
            self.set(a, j, v);
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries(self.to_rows().iter().map(|r| {
                r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
            }))
            .finish()
    }
}

/// Extended gcd: returns `(g, s, t)` with `g = s*a + t*b` and `g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Unimodular 2x2 block `[[s, t], [-b/g, a/g]]` that sends `(a, b)` to `(g, 0)`.
fn gcd_block(a: &BigInt, b: &BigInt) -> [BigInt; 4] {
    // When a | b a plain elimination step leaves the pivot row untouched,
    // which the Smith loop relies on to terminate.
    if !a.is_zero() && b.is_multiple_of(a) {
        return [BigInt::one(), BigInt::zero(), -(b / a), BigInt::one()];
    }
    let (g, s, t) = ext_gcd(a, b);
    let p = a / &g;
    let q = b / &g;
    [s, t, -q, p]
}

/// Row Hermite normal form `h = u * m` of a matrix.
#[derive(Debug, Clone)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each nonzero row of `h`, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of `h`.
    pub fn nonzero_rows(&self) -> IntMatrix {
        IntMatrix::from_rows(
            self.h.cols(),
            (0..self.rank()).map(|i| self.h.row(i).to_vec()).collect(),
        )
        .expect("consistent shape")
    }
}

/// Computes the row Hermite normal form: pivots positive, entries above a
/// pivot reduced into `[0, pivot)`, zero rows at the bottom.
pub fn hnf(m: &IntMatrix) -> Hnf {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h.get(i, c).is_zero() {
                continue;
            }
            let block = gcd_block(h.get(r, c), h.get(i, c));
            let coeffs = [&block[0], &block[1], &block[2], &block[3]];
            h.combine_rows(r, i, coeffs);
            u.combine_rows(r, i, coeffs);
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&pivot);
            if !q.is_zero() {
                h.sub_row_multiple(i, r, &q);
                u.sub_row_multiple(i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Hnf { h, u, pivots }
}

/// Checks the row-HNF shape predicate.
pub fn is_hnf(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for i in 0..h.rows() {
        let lead = (0..h.cols()).find(|&j| !h.get(i, j).is_zero());
        match lead {
            None => seen_zero_row = true,
            Some(c) => {
                if seen_zero_row || last_pivot.is_some_and(|p| c <= p) {
                    return false;
                }
                let pivot = h.get(i, c);
                if !pivot.is_positive() {
                    return false;
                }
                for k in 0..i {
                    let e = h.get(k, c);
                    if e.is_negative() || e >= pivot {
                        return false;
                    }
                }
                last_pivot = Some(c);
            }
        }
    }
    true
}

/// Smith normal form `s = u * m * w`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub w: IntMatrix,
}

impl Snf {
    /// Diagonal entries `d_1 | d_2 | ...`, `min(rows, cols)` of them.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut w = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // Smallest nonzero entry of the trailing block; ties keep (t, t).
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = s.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| e.abs() < s.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Snf { s, u, w };
            };
            if s.get(pi, pj).abs() < s.get(t, t).abs() || s.get(t, t).is_zero() {
                s.swap_rows(t, pi);
                u.swap_rows(t, pi);
                s.swap_cols(t, pj);
                w.swap_cols(t, pj);
            }

            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let block = gcd_block(s.get(t, t), s.get(i, t));
                let coeffs = [&block[0], &block[1], &block[2], &block[3]];
                s.combine_rows(t, i, coeffs);
                u.combine_rows(t, i, coeffs);
            }
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let block = gcd_block(s.get(t, t), s.get(t, j));
                // column version: col_t <- s*col_t + t*col_j ; col_j <- -q*col_t + p*col_j
                let coeffs = [&block[0], &block[1], &block[2], &block[3]];
                s.combine_cols(t, j, coeffs);
                w.combine_cols(t, j, coeffs);
            }

            let column_clean = (t + 1..rows).all(|i| s.get(i, t).is_zero());
            let row_clean = (t + 1..cols).all(|j| s.get(t, j).is_zero());
            if !(column_clean && row_clean) {
                continue;
            }
            let pivot = s.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !s.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.sub_row_multiple(t, i, &-&one);
                    u.sub_row_multiple(t, i, &-one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { s, u, w }
}

/// Sublattice of `Z^ambient_rank`, stored as a canonical row-HNF basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl Sublattice {
    pub fn zero(ambient_rank: usize) -> Self {
        Sublattice {
            ambient_rank,
            basis: IntMatrix::zeros(0, ambient_rank),
        }
    }

    pub fn full(ambient_rank: usize) -> Self {
        Sublattice {
            ambient_rank,
            basis: IntMatrix::identity(ambient_rank),
        }
    }

    /// The sublattice generated by the rows of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Self {
        Sublattice {
            ambient_rank: generators.cols(),
            basis: hnf(generators).nonzero_rows(),
        }
    }

    pub fn from_vectors(ambient_rank: usize, vectors: Vec<IntVector>) -> Result<Self, LinAlgError> {
        Ok(Self::from_generators(&IntMatrix::from_rows(
            ambient_rank,
            vectors,
        )?))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<IntVector> {
        self.basis.to_rows()
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool, LinAlgError> {
        member(v, self)
    }

    /// True when every basis vector of `self` lies in `other`.
    pub fn is_sublattice_of(&self, other: &Sublattice) -> Result<bool, LinAlgError> {
        check_ambient(self, other)?;
        for i in 0..self.rank() {
            if !member(self.basis.row(i), other)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Re-embeds the lattice into a larger free group; coordinate `i` goes to
    /// `positions[i]` and all other coordinates are zero.
    pub fn extend_by_zero(&self, ambient_rank: usize, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.ambient_rank);
        let mut rows = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let mut v = vec![BigInt::zero(); ambient_rank];
            for (k, &p) in positions.iter().enumerate() {
                v[p] = self.basis.get(i, k).clone();
            }
            rows.push(v);
        }
        Sublattice::from_vectors(ambient_rank, rows).expect("consistent shape")
    }
}

impl fmt::Debug for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sublattice(rank {} in Z^{}) ", self.rank(), self.ambient_rank)?;
        f.debug_list()
            .entries(self.basis.to_rows().iter().map(|r| {
                r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
            }))
            .finish()
    }
}

fn check_ambient(a: &Sublattice, b: &Sublattice) -> Result<(), LinAlgError> {
    if a.ambient_rank != b.ambient_rank {
        return Err(LinAlgError::AmbientMismatch(a.ambient_rank, b.ambient_rank));
    }
    Ok(())
}

/// Kernel of `m` viewed as a map from `Z^cols` to `Z^rows`.
///
/// The kernel basis is read off the rows of the HNF transform of `m^T` that
/// annihilate it.
pub fn integer_kernel(m: &IntMatrix) -> Sublattice {
    let decomposition = hnf(&m.transpose());
    let rank = decomposition.rank();
    let cols = m.cols();
    let rows = (rank..cols)
        .map(|i| decomposition.u.row(i).to_vec())
        .collect();
    Sublattice::from_vectors(cols, rows).expect("consistent shape")
}

/// Writes `target` as an integer combination of the HNF rows with the given
/// pivots. Returns the coefficients, or `None` if `target` is not in the span.
fn back_substitute(basis: &IntMatrix, pivots: &[usize], target: &[BigInt]) -> Option<IntVector> {
    let mut residual = target.to_vec();
    let mut coeffs = Vec::with_capacity(pivots.len());
    for (i, &c) in pivots.iter().enumerate() {
        if residual[..c].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = residual[c].div_rem(basis.get(i, c));
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (j, x) in residual.iter_mut().enumerate().skip(c) {
                *x -= &q * basis.get(i, j);
            }
        }
        coeffs.push(q);
    }
    residual.iter().all(Zero::is_zero).then_some(coeffs)
}

fn pivot_columns(basis: &IntMatrix) -> Vec<usize> {
    (0..basis.rows())
        .map(|i| {
            (0..basis.cols())
                .find(|&j| !basis.get(i, j).is_zero())
                .expect("basis rows are nonzero")
        })
        .collect()
}

/// Lattice membership by back-substitution against the HNF basis.
pub fn member(v: &[BigInt], lattice: &Sublattice) -> Result<bool, LinAlgError> {
    if v.len() != lattice.ambient_rank {
        return Err(LinAlgError::DimensionMismatch {
            expected: lattice.ambient_rank,
            found: v.len(),
        });
    }
    let pivots = pivot_columns(&lattice.basis);
    Ok(back_substitute(&lattice.basis, &pivots, v).is_some())
}

/// Finds integer coefficients `c` with `c * generators = target`, if any.
pub fn solve_combination(
    generators: &IntMatrix,
    target: &[BigInt],
) -> Result<Option<IntVector>, LinAlgError> {
    if target.len() != generators.cols() {
        return Err(LinAlgError::DimensionMismatch {
            expected: generators.cols(),
            found: target.len(),
        });
    }
    let decomposition = hnf(generators);
    let Some(coeffs) = back_substitute(&decomposition.h, &decomposition.pivots, target) else {
        return Ok(None);
    };
    // target = coeffs * H = coeffs * U_top * generators
    let mut out = vec![BigInt::zero(); generators.rows()];
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (j, x) in out.iter_mut().enumerate() {
            *x += c * decomposition.u.get(i, j);
        }
    }
    Ok(Some(out))
}

pub fn lattice_sum(ambient_rank: usize, parts: &[Sublattice]) -> Result<Sublattice, LinAlgError> {
    let mut rows = Vec::new();
    for p in parts {
        if p.ambient_rank != ambient_rank {
            return Err(LinAlgError::AmbientMismatch(ambient_rank, p.ambient_rank));
        }
        rows.extend(p.basis.to_rows());
    }
    Sublattice::from_vectors(ambient_rank, rows)
}

pub fn lattice_equal(a: &Sublattice, b: &Sublattice) -> Result<bool, LinAlgError> {
    check_ambient(a, b)?;
    Ok(a.basis == b.basis)
}

/// Smallest sublattice containing `lattice` with torsion-free quotient,
/// computed as the kernel of the annihilator.
pub fn saturation(lattice: &Sublattice) -> Sublattice {
    let annihilator = integer_kernel(&lattice.basis);
    integer_kernel(annihilator.basis())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(d) => write!(f, "{d}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

pub fn sublattice_index(lattice: &Sublattice) -> LatticeIndex {
    if lattice.rank() < lattice.ambient_rank {
        return LatticeIndex::Infinite;
    }
    // Full rank HNF is upper triangular with the pivots on the diagonal.
    let det = (0..lattice.rank()).fold(BigInt::one(), |acc, i| acc * lattice.basis.get(i, i));
    LatticeIndex::Finite(det)
}
