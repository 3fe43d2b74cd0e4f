//! Root counts for systems with `n + 1` or `n + 2` monomials: positive
//! orthant, real torus, and affine space.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::binomial::{count_positive_binomial, count_torus_binomial, BinomialCount, BinomialSystem};
use crate::error::{Error, Result};
use crate::gale::{
    find_subcircuit, interval_i, reduce_to_gale, reindex_candidates, GaleSystem, GenericityReport, Interval, Support,
};
use crate::linalg::{rank_mod2, rref, smith, IntMatrix};
use crate::logsign::{
    count_roots_in_interval, CriticalSet, Endpoint, IntervalCount, LogLinForm, PrecisionBudget, SignOptions,
};
use crate::unipoly::IntPoly;

/// `n` equations in `n` variables sharing the monomials of `support`;
/// row `i` of `coeffs` holds the coefficients of equation `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    support: Support,
    coeffs: IntMatrix,
}

impl PolySystem {
    pub fn new(support: Support, coeffs: IntMatrix) -> Result<Self> {
        let n = support.dim();
        let t = support.len();
        if coeffs.rows() != n || coeffs.cols() != t {
            return Err(Error::Shape(format!(
                "{}x{} coefficients for {n} equations on {t} monomials",
                coeffs.rows(),
                coeffs.cols()
            )));
        }
        if n == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        if t != n + 1 && t != n + 2 {
            return Err(Error::Validation(format!(
                "unsupported support size {t} for n = {n} (expected {} or {})",
                n + 1,
                n + 2
            )));
        }
        if let Some(i) = (0..n).find(|&i| coeffs.row(i).iter().all(|c| c.is_zero())) {
            return Err(Error::Validation(format!("equation {} has no terms", i + 1)));
        }
        Ok(Self { support, coeffs })
    }

    pub fn from_i64<P: AsRef<[i64]>, C: AsRef<[i64]>>(n: usize, points: &[P], coeffs: &[C]) -> Result<Self> {
        Self::new(Support::from_i64(n, points)?, IntMatrix::from_rows(coeffs))
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn coeffs(&self) -> &IntMatrix {
        &self.coeffs
    }
}

/// Outcome of a count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountResult {
    Finite(u64),
    Infinite,
    GenericityFailure(String),
    /// A count that relies on strata assumed empty without proof.
    UnverifiedGenericity {
        count: u64,
        caveat: String,
    },
}

impl fmt::Display for CountResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountResult::Finite(k) => write!(f, "{k}"),
            CountResult::Infinite => write!(f, "infinitely many"),
            CountResult::GenericityFailure(d) => write!(f, "refused ({d})"),
            CountResult::UnverifiedGenericity { count, caveat } => write!(f, "{count} (unverified: {caveat})"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CountOptions {
    /// Lowers the precision ceiling; counts then fail rather than degrade.
    pub precision_cap_bits: Option<u64>,
}

impl CountOptions {
    fn sign_options(&self) -> SignOptions {
        SignOptions { precision_cap_bits: self.precision_cap_bits }
    }
}

/// Parity data deciding which cells of the `u`-line carry torus roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthantSelector {
    /// `V mod 2` from the Smith form of `[a_1..a_n]`, row-major.
    pub v_mod2: Vec<Vec<u8>>,
    pub r: usize,
    /// Columns of `V` whose Smith diagonal entry is even.
    pub even_columns: Vec<usize>,
    /// `b_1..b_m mod 2`
    pub b_parities: Vec<u8>,
}

impl OrthantSelector {
    /// `prod_{i<=m} eps_i^{b_i mod 2}`
    pub fn lambda(&self, eps: &[i8]) -> i8 {
        self.b_parities.iter().zip(eps).map(|(&p, &e)| if p == 1 { e } else { 1 }).product()
    }

    /// `(eps_1..eps_n)^{V mod 2}`, entry `k`.
    pub fn gamma_prime(&self, eps: &[i8], k: usize) -> i8 {
        (0..eps.len()).map(|i| if self.v_mod2[i][k] == 1 { eps[i] } else { 1 }).product()
    }

    pub fn eligible(&self, eps: &[i8], sign_u: i8) -> bool {
        self.lambda(eps) == sign_u && self.even_columns.iter().all(|&k| self.gamma_prime(eps, k) > 0)
    }

    pub fn multiplicity(&self) -> u64 {
        1u64 << (self.v_mod2.len() - self.r)
    }
}

pub fn orthant_selector(gs: &GaleSystem) -> Result<OrthantSelector> {
    let a = gs.exponent_matrix();
    if a.det()?.is_zero() {
        return Err(Error::SingularExponents);
    }
    let st = smith(&a);
    let n = a.rows();
    let diag = st.diagonal();
    Ok(OrthantSelector {
        v_mod2: (0..n).map(|i| (0..n).map(|k| u8::from(st.v[(i, k)].is_odd())).collect()).collect(),
        r: rank_mod2(&a),
        even_columns: (0..n).filter(|&k| diag[k].is_even()).collect(),
        b_parities: gs.relation[..gs.m].iter().map(|b| u8::from(b.is_odd())).collect(),
    })
}

/// One cell of the `u`-line in a torus count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellTally {
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub eligible: bool,
    pub count: Option<IntervalCount>,
}

/// Intermediate data behind a count.
#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub gale: Option<GaleSystem>,
    pub genericity: Option<GenericityReport>,
    pub critical_poly: Option<IntPoly>,
    pub interval: Option<IntervalCount>,
    pub cells: Vec<CellTally>,
    pub notes: Vec<String>,
}

/// A count with the data that produced it.
#[derive(Clone, Debug)]
pub struct Detailed {
    pub result: CountResult,
    pub diagnostics: Diagnostics,
}

impl Detailed {
    fn plain(result: CountResult) -> Self {
        Self { result, diagnostics: Diagnostics::default() }
    }
}

/// Roots in the positive orthant.
pub fn count_positive(f: &PolySystem, opts: &CountOptions) -> Result<CountResult> {
    Ok(count_positive_detailed(f, opts)?.result)
}

/// Roots in `(R*)^n`.
pub fn count_torus(f: &PolySystem, opts: &CountOptions) -> Result<CountResult> {
    Ok(count_torus_detailed(f, opts)?.result)
}

fn check_span(f: &PolySystem) -> Result<()> {
    if f.support().affine_rank() < f.dim() {
        return Err(Error::HyperplaneSupport);
    }
    Ok(())
}

/// Binomial form of an `(n+1)`-nomial system: `x^{a_i - a_k} = g_i`.
fn binomial_form(f: &PolySystem) -> Result<std::result::Result<BinomialSystem, Detailed>> {
    let n = f.dim();
    let t = n + 1;
    let c = f.coeffs();
    if c.rank() < n {
        return Ok(Err(Detailed::plain(CountResult::GenericityFailure(format!(
            "coefficient matrix has rank {} < {n}",
            c.rank()
        )))));
    }
    let k = (0..t)
        .rev()
        .find(|&k| {
            let others: Vec<usize> = (0..t).filter(|&j| j != k).collect();
            c.select_columns(&others).det().is_ok_and(|d| !d.is_zero())
        })
        .ok_or_else(|| Error::Internal("no nonsingular coefficient minor".into()))?;
    let mut order: Vec<usize> = (0..t).filter(|&j| j != k).collect();
    order.push(k);
    let (red, _) = rref(&c.select_columns(&order).to_rat());
    let gammas: Vec<BigRational> = (0..n).map(|i| -red[(i, n)].clone()).collect();
    let origin = f.support().point(k).to_vec();
    let moved = f.support().translated(&origin);
    let exps = moved.columns(&order[..n]);
    if gammas.iter().any(|g| g.is_zero()) {
        // some x^{a_i} = 0: no roots with nonzero coordinates
        return Ok(Err(Detailed::plain(CountResult::Finite(0))));
    }
    Ok(Ok(BinomialSystem::new(exps, gammas)?))
}

/// Tries each placement of the support and returns the first whose
/// reduction satisfies the minor conditions and yields distinct poles.
/// The form is `None` when some `x^{a_i}` is forced to vanish.
fn choose_gale(f: &PolySystem, torus: bool) -> Result<std::result::Result<(GaleSystem, Option<LogLinForm>), String>> {
    let cd = find_subcircuit(f.support())?;
    let mut first_failure: Option<String> = None;
    for r in reindex_candidates(&cd, torus) {
        let gs = match reduce_to_gale(f, &r) {
            Ok(gs) => gs,
            Err(Error::Genericity(msg)) => {
                first_failure.get_or_insert(msg);
                continue;
            }
            Err(e) => return Err(e),
        };
        if gs.gammas.iter().any(|(a, b)| a.is_zero() && b.is_zero()) {
            return Ok(Ok((gs, None)));
        }
        match gs.log_form() {
            Ok(l) => return Ok(Ok((gs, Some(l)))),
            Err(Error::CoincidentPoles(i, j)) => {
                first_failure.get_or_insert(format!("linear forms {} and {} share a pole", i + 1, j + 1));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Err(first_failure.unwrap_or_else(|| "no admissible placement of the support".into())))
}

pub fn count_positive_detailed(f: &PolySystem, opts: &CountOptions) -> Result<Detailed> {
    check_span(f)?;
    let n = f.dim();
    if f.support().len() == n + 1 {
        let sys = match binomial_form(f)? {
            Ok(s) => s,
            Err(d) => return Ok(d),
        };
        return Ok(Detailed::plain(match count_positive_binomial(&sys)? {
            BinomialCount::Finite(k) => CountResult::Finite(k),
            BinomialCount::Infinite => CountResult::Infinite,
        }));
    }
    let (gs, form) = match choose_gale(f, false)? {
        Ok(x) => x,
        Err(msg) => return Ok(Detailed::plain(CountResult::GenericityFailure(msg))),
    };
    let mut diag =
        Diagnostics { genericity: Some(GenericityReport { passed: true, failing_minor: None }), ..Default::default() };
    let form = match form {
        Some(l) if !gs.has_dead_form() => l,
        _ => {
            diag.notes.push("a linear form is non-positive on (0, inf)".into());
            diag.gale = Some(gs);
            return Ok(Detailed { result: CountResult::Finite(0), diagnostics: diag });
        }
    };
    let (lo, hi) = match interval_i(&gs) {
        Interval::Empty => {
            diag.notes.push("positivity interval is empty".into());
            diag.gale = Some(gs);
            return Ok(Detailed { result: CountResult::Finite(0), diagnostics: diag });
        }
        Interval::Open(lo, hi) => (lo, hi),
    };
    let budget = PrecisionBudget::new(&form);
    let mut crit = CriticalSet::new(&form)?;
    let tally = count_roots_in_interval(&form, &mut crit, &lo, &hi, &budget, &opts.sign_options())?;
    diag.critical_poly = Some(crit.g.clone());
    diag.cells.push(CellTally { lo, hi, eligible: true, count: Some(tally.clone()) });
    diag.interval = Some(tally.clone());
    diag.gale = Some(gs);
    Ok(Detailed { result: CountResult::Finite(tally.total()), diagnostics: diag })
}

pub fn count_torus_detailed(f: &PolySystem, opts: &CountOptions) -> Result<Detailed> {
    check_span(f)?;
    let n = f.dim();
    if f.support().len() == n + 1 {
        let sys = match binomial_form(f)? {
            Ok(s) => s,
            Err(d) => return Ok(d),
        };
        return Ok(Detailed::plain(CountResult::Finite(count_torus_binomial(&sys)?)));
    }
    let (gs, form) = match choose_gale(f, true)? {
        Ok(x) => x,
        Err(msg) => return Ok(Detailed::plain(CountResult::GenericityFailure(msg))),
    };
    let mut diag =
        Diagnostics { genericity: Some(GenericityReport { passed: true, failing_minor: None }), ..Default::default() };
    let Some(form) = form else {
        diag.notes.push("some x^a_i is forced to vanish".into());
        diag.gale = Some(gs);
        return Ok(Detailed { result: CountResult::Finite(0), diagnostics: diag });
    };
    let sel = orthant_selector(&gs)?;
    let budget = PrecisionBudget::new(&form);
    let mut crit = CriticalSet::new(&form)?;

    // breakpoints: poles of L and zeros of the remaining forms
    let mut cuts: Vec<BigRational> = gs.all_forms().iter().filter(|(a, _)| !a.is_zero()).map(|(a, b)| -b / a).collect();
    cuts.sort();
    cuts.dedup();
    let mut ends = vec![Endpoint::NegInf];
    ends.extend(cuts.iter().cloned().map(Endpoint::Finite));
    ends.push(Endpoint::PosInf);

    let forms = gs.all_forms();
    let mut total = 0u64;
    for w in ends.windows(2) {
        let sample = sample_point(&w[0], &w[1]);
        let eps: Vec<i8> = forms[..n].iter().map(|(a, b)| sign_rat(&(a * &sample + b))).collect();
        let eligible = eps.iter().all(|&e| e != 0) && sel.eligible(&eps, sign_rat(&sample));
        let count = if eligible {
            let c = count_roots_in_interval(&form, &mut crit, &w[0], &w[1], &budget, &opts.sign_options())?;
            total += sel.multiplicity() * c.total();
            Some(c)
        } else {
            None
        };
        diag.cells.push(CellTally { lo: w[0].clone(), hi: w[1].clone(), eligible, count });
    }
    diag.critical_poly = Some(crit.g.clone());
    diag.gale = Some(gs);
    Ok(Detailed { result: CountResult::Finite(total), diagnostics: diag })
}

fn sample_point(lo: &Endpoint, hi: &Endpoint) -> BigRational {
    let one = BigRational::from_integer(1.into());
    match (lo, hi) {
        (Endpoint::Finite(a), Endpoint::Finite(b)) => (a + b) / BigRational::from_integer(2.into()),
        (Endpoint::Finite(a), _) => a + one,
        (_, Endpoint::Finite(b)) => b - one,
        _ => BigRational::zero(),
    }
}

fn sign_rat(q: &BigRational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Roots in `R^n`: torus roots plus those on coordinate strata.
pub fn count_affine(f: &PolySystem, opts: &CountOptions) -> Result<CountResult> {
    Ok(count_affine_detailed(f, opts)?.result)
}

pub fn count_affine_detailed(f: &PolySystem, opts: &CountOptions) -> Result<Detailed> {
    let torus = count_torus_detailed(f, opts)?;
    let base = match torus.result {
        CountResult::Finite(k) => k,
        _ => return Ok(torus),
    };
    let n = f.dim();
    if n >= 20 {
        return Err(Error::Domain("too many coordinate strata".into()));
    }
    let pts = f.support().points();
    let mins: Vec<BigInt> = (0..n).map(|i| pts.iter().map(|p| p[i].clone()).min().unwrap()).collect();
    let mut diag = torus.diagnostics;
    let mut extra = 0u64;
    let mut caveats = Vec::new();
    for mask in 1u32..(1 << n) {
        let z: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if z.iter().any(|&i| mins[i].is_negative()) {
            continue;
        }
        let k = n - z.len();
        let kept: Vec<usize> = (0..pts.len()).filter(|&j| z.iter().all(|&i| pts[j][i].is_zero())).collect();
        let cz = f.coeffs().select_columns(&kept);
        let label: Vec<usize> = z.iter().map(|i| i + 1).collect();
        if kept.is_empty() || cz.is_zero() {
            if k == 0 {
                diag.notes.push("the origin is a root".into());
                extra += 1;
                continue;
            }
            diag.notes.push(format!("every point with x_i = 0 for i in {label:?} is a root"));
            return Ok(Detailed { result: CountResult::Infinite, diagnostics: diag });
        }
        if k == 0 || cz.rank() == kept.len() {
            continue;
        }
        caveats.push(format!("stratum x_i = 0 for i in {label:?} assumed rootless"));
    }
    let count = base + extra;
    let result = if caveats.is_empty() {
        CountResult::Finite(count)
    } else {
        CountResult::UnverifiedGenericity { count, caveat: caveats.join("; ") }
    };
    Ok(Detailed { result, diagnostics: diag })
}
