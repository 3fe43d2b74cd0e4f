//! Exact integer and rational matrix algebra.
//!
//! Everything here is arbitrary precision: row reduction over Q, Hermite and
//! Smith factorizations over Z, primitive kernel vectors, ranks over F_2, and
//! logarithmic heights of rationals.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigfloat::{log_ball, Dyadic};
use crate::error::{Error, Result};

/// Dense integer matrix stored in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from machine-integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend(r.as_ref().iter().map(|&v| BigInt::from(v)));
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Shape("ragged rows".into()));
            }
            data.extend(r);
        }
        Self::new(n, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Sub-matrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), self.cols);
        for (k, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                m[(k, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("determinant of a non-square {}x{} matrix", self.rows, self.cols)));
        }
        Ok(bareiss_det(self.clone()))
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let (r, _) = rref(&RatMatrix::from(self));
        r.pivot_columns().len()
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix::from(self)
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

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Replaces rows (p, q) by (x*p + y*q, u*p + v*q).
    fn combine_rows(&mut self, p: usize, q: usize, coeffs: [&BigInt; 4]) {
        let [x, y, u, v] = coeffs;
        for j in 0..self.cols {
            let a = self[(p, j)].clone();
            let b = self[(q, j)].clone();
            self[(p, j)] = x * &a + y * &b;
            self[(q, j)] = u * &a + v * &b;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|v| v.to_string()).collect()).collect();
        write!(f, "IntMatrix{rows:?}")
    }
}

fn bareiss_det(mut m: IntMatrix) -> BigInt {
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}

/// Dense rational matrix; entries are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column indices of the leading ones, assuming `self` is in RREF.
    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.rows).filter_map(|i| self.row(i).iter().position(|v| !v.is_zero())).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, k: &BigRational) {
        for j in 0..self.cols {
            let v = &self[(i, j)] * k;
            self[(i, j)] = v;
        }
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigRational) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }
}

impl From<&IntMatrix> for RatMatrix {
    fn from(m: &IntMatrix) -> Self {
        Self { rows: m.rows, cols: m.cols, data: m.data.iter().map(|v| BigRational::from_integer(v.clone())).collect() }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|v| v.to_string()).collect()).collect();
        write!(f, "RatMatrix{rows:?}")
    }
}

/// Gauss-Jordan elimination. Returns the reduced row echelon form `R` and the
/// accumulated row transform `T` with `T * M = R`.
pub fn rref(m: &RatMatrix) -> (RatMatrix, RatMatrix) {
    let mut r = m.clone();
    let mut t = RatMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..r.cols {
        if pivot_row == r.rows {
            break;
        }
        let Some(p) = (pivot_row..r.rows).find(|&i| !r[(i, col)].is_zero()) else {
            continue;
        };
        r.swap_rows(p, pivot_row);
        t.swap_rows(p, pivot_row);
        let inv = r[(pivot_row, col)].recip();
        r.scale_row(pivot_row, &inv);
        t.scale_row(pivot_row, &inv);
        for i in 0..r.rows {
            if i == pivot_row || r[(i, col)].is_zero() {
                continue;
            }
            let k = -r[(i, col)].clone();
            r.add_row_multiple(i, pivot_row, &k);
            t.add_row_multiple(i, pivot_row, &k);
        }
        pivot_row += 1;
    }
    (r, t)
}

/// Row-style Hermite factorization: `U * M = R` with `U` unimodular and `R`
/// in echelon form with positive pivots and reduced entries above them.
pub fn hermite(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut r = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..r.cols {
        if pivot_row == r.rows {
            break;
        }
        for i in pivot_row + 1..r.rows {
            if r[(i, col)].is_zero() {
                continue;
            }
            let a = r[(pivot_row, col)].clone();
            let b = r[(i, col)].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let u_coef = -(&b / &g);
            let v_coef = &a / &g;
            r.combine_rows(pivot_row, i, [&x, &y, &u_coef, &v_coef]);
            u.combine_rows(pivot_row, i, [&x, &y, &u_coef, &v_coef]);
        }
        if r[(pivot_row, col)].is_zero() {
            continue;
        }
        if r[(pivot_row, col)].is_negative() {
            r.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let pivot = r[(pivot_row, col)].clone();
        for i in 0..pivot_row {
            let q = -r[(i, col)].div_floor(&pivot);
            r.add_row_multiple(i, pivot_row, &q);
            u.add_row_multiple(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (u, r)
}

/// `U * M * V = S` with `U`, `V` unimodular and `S` diagonal-rectangular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithTriple {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithTriple {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|v| !v.is_zero()).count()
    }
}

/// Smith normal form with transforms. Invariant factors are non-negative and
/// form a divisibility chain.
pub fn smith(m: &IntMatrix) -> SmithTriple {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = s.rows.min(s.cols);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..s.rows {
                for j in t..s.cols {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_smith(u, s, v);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..s.rows {
                let q = -s[(i, t)].div_floor(&pivot);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..s.cols {
                let q = -s[(t, j)].div_floor(&pivot);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..s.rows).find(|&i| (t + 1..s.cols).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    s.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_smith(u, s, v)
}

fn finish_smith(mut u: IntMatrix, mut s: IntMatrix, v: IntMatrix) -> SmithTriple {
    for t in 0..s.rows.min(s.cols) {
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithTriple { u, s, v }
}

/// Generator of the one-dimensional right kernel of `m`, with coprime entries
/// and its first nonzero entry positive.
pub fn primitive_right_kernel(m: &IntMatrix) -> Result<Vec<BigInt>> {
    let (r, _) = rref(&RatMatrix::from(m));
    let pivots = r.pivot_columns();
    if pivots.len() + 1 != m.cols {
        return Err(Error::Rank { expected: m.cols.saturating_sub(1), found: pivots.len() });
    }
    let free = (0..m.cols).find(|j| !pivots.contains(j)).expect("one free column");
    let mut x = vec![BigRational::zero(); m.cols];
    x[free] = BigRational::one();
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = -r[(i, free)].clone();
    }
    Ok(primitive_integer_vector(&x))
}

/// Scales a nonzero rational vector to a primitive integer vector with first
/// nonzero entry positive.
pub fn primitive_integer_vector(x: &[BigRational]) -> Vec<BigInt> {
    let lcm = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut ints: Vec<BigInt> = x.iter().map(|v| (v * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() {
        for v in &mut ints {
            *v /= &g;
        }
    }
    if ints.iter().find(|v| !v.is_zero()).is_some_and(Signed::is_negative) {
        for v in &mut ints {
            *v = -&*v;
        }
    }
    ints
}

/// Rank of the entrywise reduction mod 2, over F_2.
pub fn rank_mod2(m: &IntMatrix) -> usize {
    let mut rows: Vec<Vec<bool>> = (0..m.rows).map(|i| m.row(i).iter().map(|v| v.is_odd()).collect()).collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= *b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dyadic upper bound on the natural-log height `max{log|p|, log|q|}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LogHeight(pub Dyadic);

impl LogHeight {
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

const HEIGHT_BITS: u64 = 40;

pub fn height(q: &BigRational) -> LogHeight {
    if q.is_zero() {
        return LogHeight(Dyadic::zero());
    }
    let top = q.numer().abs().max(q.denom().abs());
    if top.is_one() {
        return LogHeight(Dyadic::zero());
    }
    let ball = log_ball(&BigRational::from_integer(top), HEIGHT_BITS).expect("positive argument");
    LogHeight(ball.upper())
}
