//! Circuit supports and the reduction of an `(n+2)`-nomial system to the
//! form `x^{a_i} = g1_i u + g0_i`, `u = x^{a_{n+1}}`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::counter::PolySystem;
use crate::error::{Error, Result};
use crate::linalg::{primitive_right_kernel, rref, IntMatrix};
use crate::logsign::{Endpoint, LogLinForm};

/// Exponent vectors `a_1..a_t` in `Z^n`, pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    n: usize,
    points: Vec<Vec<BigInt>>,
}

impl Support {
    pub fn new(n: usize, points: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::Shape(format!("point of length {} in dimension {n}", p.len())));
        }
        let mut seen = HashSet::new();
        for (i, p) in points.iter().enumerate() {
            if !seen.insert(p) {
                return Err(Error::Validation(format!("exponent vector {} repeats an earlier one", i + 1)));
            }
        }
        Ok(Self { n, points })
    }

    pub fn from_i64<R: AsRef<[i64]>>(n: usize, points: &[R]) -> Result<Self> {
        Self::new(n, points.iter().map(|p| p.as_ref().iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<BigInt>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[BigInt] {
        &self.points[i]
    }

    /// Row of ones above the coordinates; column `j` is `(1, a_j)`.
    pub fn lifted(&self) -> IntMatrix {
        let t = self.len();
        let mut rows = vec![vec![BigInt::from(1); t]];
        for k in 0..self.n {
            rows.push(self.points.iter().map(|p| p[k].clone()).collect());
        }
        IntMatrix::from_big_rows(rows, t).expect("consistent shape")
    }

    /// Dimension of the affine span.
    pub fn affine_rank(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        self.lifted().rank() - 1
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        Self { n: self.n, points: order.iter().map(|&i| self.points[i].clone()).collect() }
    }

    /// Every point shifted by `-origin`.
    pub fn translated(&self, origin: &[BigInt]) -> Self {
        Self {
            n: self.n,
            points: self.points.iter().map(|p| p.iter().zip(origin).map(|(a, o)| a - o).collect()).collect(),
        }
    }

    /// `n x k` matrix whose columns are the selected points.
    pub fn columns(&self, idx: &[usize]) -> IntMatrix {
        let rows = (0..self.n).map(|k| idx.iter().map(|&j| self.points[j][k].clone()).collect()).collect();
        IntMatrix::from_big_rows(rows, idx.len()).expect("consistent shape")
    }
}

/// The non-degenerate sub-circuit of an `(n+2)`-point support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitData {
    /// Input indices of the points with nonzero relation coefficient, ascending.
    pub sigma: Vec<usize>,
    /// `sigma` has `m + 2` points.
    pub m: usize,
    /// Primitive kernel vector of the lifted support restricted to `sigma`.
    pub relation: Vec<BigInt>,
    /// Kernel vector over all points (zeros outside `sigma`).
    pub full: Vec<BigInt>,
}

pub fn find_subcircuit(a: &Support) -> Result<CircuitData> {
    let n = a.dim();
    if a.len() != n + 2 {
        return Err(Error::Shape(format!("{} points in dimension {n}, expected {}", a.len(), n + 2)));
    }
    let lifted = a.lifted();
    if lifted.rank() < n + 1 {
        return Err(Error::HyperplaneSupport);
    }
    let full = primitive_right_kernel(&lifted)?;
    let sigma: Vec<usize> = (0..full.len()).filter(|&j| !full[j].is_zero()).collect();
    let relation = sigma.iter().map(|&j| full[j].clone()).collect();
    Ok(CircuitData { m: sigma.len() - 2, sigma, relation, full })
}

/// A placement of the support: `order[k]` is the input index of position `k`.
/// Positions `0..m` hold the rest of the sub-circuit, `m..n` the points
/// outside it, `n` the point giving `u`, and `n+1` the point moved to the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reindexing {
    pub order: Vec<usize>,
    pub m: usize,
}

/// All admissible placements, preferred first. The last two positions are
/// drawn from the sub-circuit, latest input indices first; in torus mode the
/// `u` point must carry an odd relation coefficient.
pub fn reindex_candidates(cd: &CircuitData, torus: bool) -> Vec<Reindexing> {
    let t = cd.full.len();
    let outside: Vec<usize> = (0..t).filter(|j| cd.full[*j].is_zero()).collect();
    let mut out = Vec::new();
    for &q in cd.sigma.iter().rev() {
        for &p in cd.sigma.iter().rev() {
            if p == q || (torus && num_integer::Integer::is_even(&cd.full[p])) {
                continue;
            }
            let mut order: Vec<usize> = cd.sigma.iter().copied().filter(|&j| j != p && j != q).collect();
            order.extend(&outside);
            order.push(p);
            order.push(q);
            out.push(Reindexing { order, m: cd.m });
        }
    }
    out
}

/// First torus placement, with the support permuted and translated so the
/// last point is the origin.
pub fn reindex_for_torus(a: &Support, cd: &CircuitData) -> Result<(Support, CircuitData)> {
    let r = reindex_candidates(cd, true)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("no odd relation coefficient".into()))?;
    let moved = a.permuted(&r.order);
    let origin = moved.point(moved.len() - 1).to_vec();
    let moved = moved.translated(&origin);
    let full: Vec<BigInt> = normalize_sign(r.order.iter().map(|&j| cd.full[j].clone()).collect());
    let sigma: Vec<usize> = (0..full.len()).filter(|&j| !full[j].is_zero()).collect();
    let relation = sigma.iter().map(|&j| full[j].clone()).collect();
    Ok((moved, CircuitData { sigma, m: cd.m, relation, full }))
}

fn normalize_sign(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        v.iter_mut().for_each(|x| *x = -&*x);
    }
    v
}

/// Outcome of the minor conditions on an `n x (n+2)` coefficient matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericityReport {
    pub passed: bool,
    pub failing_minor: Option<String>,
}

impl GenericityReport {
    fn pass() -> Self {
        Self { passed: true, failing_minor: None }
    }

    fn fail(msg: String) -> Self {
        Self { passed: false, failing_minor: Some(msg) }
    }
}

/// Checks the `n x n` minors on columns `{1..n, n+2}` with one column dropped
/// and the `2 x 2` minors of the last two columns.
pub fn check_genericity(c: &IntMatrix) -> GenericityReport {
    let n = c.rows();
    if c.cols() != n + 2 {
        return GenericityReport::fail(format!("expected {} columns, found {}", n + 2, c.cols()));
    }
    let mut base: Vec<usize> = (0..n).collect();
    base.push(n + 1);
    for drop in base.iter().rev() {
        let cols: Vec<usize> = base.iter().copied().filter(|j| j != drop).collect();
        if c.select_columns(&cols).det().map_or(true, |d| d.is_zero()) {
            let shown: Vec<usize> = cols.iter().map(|j| j + 1).collect();
            return GenericityReport::fail(format!("{n}x{n} minor on columns {shown:?} vanishes"));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = &c[(i, n)] * &c[(j, n + 1)] - &c[(i, n + 1)] * &c[(j, n)];
            if d.is_zero() {
                return GenericityReport::fail(format!(
                    "2x2 minor on rows [{}, {}] of columns [{}, {}] vanishes",
                    i + 1,
                    j + 1,
                    n + 1,
                    n + 2
                ));
            }
        }
    }
    GenericityReport::pass()
}

/// The system `x^{a_i} = g1_i u + g0_i` (`i = 1..n`) with `u = x^{a_{n+1}}`,
/// together with the circuit relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaleSystem {
    pub n: usize,
    pub m: usize,
    pub reindexing: Reindexing,
    /// Reindexed support with the last point at the origin.
    pub support: Support,
    /// `b_1..b_{m+2}`: positions `0..m`, then `u`, then the origin;
    /// first entry positive.
    pub relation: Vec<BigInt>,
    /// `(g1_i, g0_i)` for `i = 1..n`.
    pub gammas: Vec<(BigRational, BigRational)>,
}

impl GaleSystem {
    /// `L(u) = sum_{i<=m} b_i log|g1_i u + g0_i| + b_{m+1} log|u|`.
    pub fn log_form(&self) -> Result<LogLinForm> {
        LogLinForm::from_gale(&self.relation[..=self.m], &self.gammas[..self.m])
    }

    /// `n x n` matrix with columns `a_1..a_n` after translation.
    pub fn exponent_matrix(&self) -> IntMatrix {
        self.support.columns(&(0..self.n).collect::<Vec<_>>())
    }

    /// The `n + 1` linear forms, ending with `(1, 0)` for `u` itself.
    pub fn all_forms(&self) -> Vec<(BigRational, BigRational)> {
        let mut v = self.gammas.clone();
        v.push((BigRational::from_integer(1.into()), BigRational::zero()));
        v
    }

    /// Some form has both coefficients non-positive, so no positive root exists.
    pub fn has_dead_form(&self) -> bool {
        self.gammas.iter().any(|(a, b)| !a.is_positive() && !b.is_positive())
    }
}

impl fmt::Display for GaleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.gammas.iter().enumerate() {
            writeln!(f, "x^a{} = ({a}) u + ({b})", i + 1)?;
        }
        let b: Vec<String> = self.relation.iter().map(|x| x.to_string()).collect();
        write!(f, "relation [{}]", b.join(", "))
    }
}

/// Row-reduces the reindexed coefficients into Gale form. Fails with
/// [`Error::Genericity`] when a required minor vanishes.
pub fn reduce_to_gale(f: &PolySystem, r: &Reindexing) -> Result<GaleSystem> {
    let n = f.dim();
    if f.support().len() != n + 2 || r.order.len() != n + 2 {
        return Err(Error::Shape(format!("expected {} monomials", n + 2)));
    }
    let c = f.coeffs().select_columns(&r.order);
    let report = check_genericity(&c);
    if let Some(msg) = report.failing_minor {
        return Err(Error::Genericity(msg));
    }
    let (red, _) = rref(&c.to_rat());
    if red.pivot_columns() != (0..n).collect::<Vec<_>>() {
        return Err(Error::Internal("unexpected pivot structure".into()));
    }
    let gammas = (0..n).map(|i| (-red[(i, n)].clone(), -red[(i, n + 1)].clone())).collect();

    let moved = f.support().permuted(&r.order);
    let origin = moved.point(n + 1).to_vec();
    let support = moved.translated(&origin);

    let cd = find_subcircuit(f.support())?;
    let full: Vec<BigInt> = r.order.iter().map(|&j| cd.full[j].clone()).collect();
    if full[..r.m].iter().any(|x| x.is_zero()) || full[n].is_zero() || full[n + 1].is_zero() {
        return Err(Error::Internal("placement does not match the sub-circuit".into()));
    }
    let mut relation: Vec<BigInt> = full[..r.m].to_vec();
    relation.push(full[n].clone());
    relation.push(full[n + 1].clone());
    Ok(GaleSystem { n, m: r.m, reindexing: r.clone(), support, relation: normalize_sign(relation), gammas })
}

/// An open interval of the real line, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interval {
    Empty,
    Open(Endpoint, Endpoint),
}

/// `{u : g1_i u + g0_i > 0 for i = 1..n+1}`.
pub fn interval_i(gs: &GaleSystem) -> Interval {
    positivity_interval(&gs.all_forms())
}

pub fn positivity_interval(forms: &[(BigRational, BigRational)]) -> Interval {
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for (a, b) in forms {
        if a.is_zero() {
            if !b.is_positive() {
                return Interval::Empty;
            }
            continue;
        }
        let root = -b / a;
        if a.is_positive() {
            if lo.as_ref().is_none_or(|l| &root > l) {
                lo = Some(root);
            }
        } else if hi.as_ref().is_none_or(|h| &root < h) {
            hi = Some(root);
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l >= h {
            return Interval::Empty;
        }
    }
    Interval::Open(lo.map_or(Endpoint::NegInf, Endpoint::Finite), hi.map_or(Endpoint::PosInf, Endpoint::Finite))
}
