//! Sign determination for linear combinations of logarithms
//! `L(u) = sum_i b_i log|s_i u + o_i|`.
//!
//! Roots of `L` on an interval are counted from the signs of `L` at the
//! interval ends and at its critical points. Critical points are roots of an
//! integer polynomial `g`; exact vanishing of `L` there is decided in
//! `Z[v]/(P)`, and nonzero signs come from ball evaluation at doubling
//! precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigfloat::{log_ball, Ball, BallSign, Dyadic};
use crate::error::{Error, Result};
use crate::linalg::height;
use crate::unipoly::{gcd, isolate_real_roots, refine, sign_at, squarefree_part, IntPoly, IsolatingInterval};

const START_BITS: u64 = 64;

/// One summand `b log|slope*u + offset|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogTerm {
    pub b: BigInt,
    pub slope: BigRational,
    pub offset: BigRational,
}

impl LogTerm {
    pub fn new(b: BigInt, slope: BigRational, offset: BigRational) -> Self {
        Self { b, slope, offset }
    }

    pub fn is_constant(&self) -> bool {
        self.slope.is_zero()
    }

    pub fn value(&self, u: &BigRational) -> BigRational {
        &self.slope * u + &self.offset
    }

    /// Zero of the linear argument, if it has one.
    pub fn pole(&self) -> Option<BigRational> {
        (!self.is_constant()).then(|| -&self.offset / &self.slope)
    }

    /// `(a, c, nu)` with `nu * (slope*u + offset) = a*u + c` integral.
    fn integral(&self) -> (BigInt, BigInt, BigInt) {
        let nu = self.slope.denom().lcm(self.offset.denom());
        let a = (&self.slope * BigRational::from_integer(nu.clone())).to_integer();
        let c = (&self.offset * BigRational::from_integer(nu.clone())).to_integer();
        (a, c, nu)
    }
}

/// `L(u) = sum b_i log|slope_i u + offset_i|` with distinct poles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogLinForm {
    terms: Vec<LogTerm>,
}

impl LogLinForm {
    pub fn new(terms: Vec<LogTerm>) -> Result<Self> {
        for t in &terms {
            if t.b.is_zero() {
                return Err(Error::Domain("zero log coefficient".into()));
            }
            if t.slope.is_zero() && t.offset.is_zero() {
                return Err(Error::Domain("identically zero linear argument".into()));
            }
        }
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                if let (Some(p), Some(q)) = (terms[i].pole(), terms[j].pole()) {
                    if p == q {
                        return Err(Error::CoincidentPoles(i, j));
                    }
                }
            }
        }
        Ok(Self { terms })
    }

    /// `sum_{i<=m} b_i log|g1_i u + g0_i| + b_{m+1} log|u|`.
    pub fn from_gale(b: &[BigInt], gammas: &[(BigRational, BigRational)]) -> Result<Self> {
        if b.len() != gammas.len() + 1 {
            return Err(Error::Shape(format!("{} coefficients for {} linear forms", b.len(), gammas.len())));
        }
        let mut terms: Vec<LogTerm> =
            gammas.iter().zip(b).map(|((g1, g0), bi)| LogTerm::new(bi.clone(), g1.clone(), g0.clone())).collect();
        terms.push(LogTerm::new(b[b.len() - 1].clone(), BigRational::one(), BigRational::zero()));
        Self::new(terms)
    }

    pub fn terms(&self) -> &[LogTerm] {
        &self.terms
    }

    /// `max |b_i|`
    pub fn coefficient_bound(&self) -> BigInt {
        self.terms.iter().map(|t| t.b.abs()).max().unwrap_or_default()
    }

    /// Poles in ascending order with the index of their term.
    pub fn poles(&self) -> Vec<(BigRational, usize)> {
        let mut p: Vec<_> = self.terms.iter().enumerate().filter_map(|(i, t)| t.pole().map(|q| (q, i))).collect();
        p.sort();
        p
    }

    pub fn is_pole(&self, q: &BigRational) -> Option<usize> {
        self.terms.iter().position(|t| t.pole().as_ref() == Some(q))
    }

    /// Plain floating-point value; `-inf`/`inf` at poles.
    pub fn eval_f64(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let v = t.slope.to_f64().unwrap_or(f64::NAN) * u + t.offset.to_f64().unwrap_or(f64::NAN);
                t.b.to_f64().unwrap_or(f64::NAN) * v.abs().ln()
            })
            .sum()
    }

    fn weight_bits(&self) -> u64 {
        let s: BigInt = self.terms.iter().map(|t| t.b.abs()).sum();
        s.bits() + 2
    }

    /// Ball containing `L(u)`; `u` must not be a pole.
    pub fn eval_ball(&self, u: &BigRational, bits: u64) -> Result<Ball> {
        let prec = bits + self.weight_bits();
        let mut acc = Ball::zero();
        for t in &self.terms {
            let v = t.value(u);
            if v.is_zero() {
                return Err(Error::Domain(format!("{u} is a pole")));
            }
            acc = &acc + &log_ball(&v.abs(), prec)?.scale(&t.b);
        }
        Ok(acc)
    }

    /// Ball containing `L` on all of `[lo, hi]`, which must be free of poles.
    pub fn enclose(&self, lo: &BigRational, hi: &BigRational, bits: u64) -> Result<Ball> {
        let prec = bits + self.weight_bits();
        let mut acc = Ball::zero();
        for t in &self.terms {
            let (a, b) = (t.value(lo), t.value(hi));
            if a.is_zero() || b.is_zero() || a.is_positive() != b.is_positive() {
                return Err(Error::Domain(format!("pole inside [{lo}, {hi}]")));
            }
            let la = log_ball(&a.abs(), prec)?;
            let term = if a == b { la } else { la.hull(&log_ball(&b.abs(), prec)?) };
            acc = &acc + &term.scale(&t.b);
        }
        Ok(acc)
    }

    fn pole_free(&self, lo: &BigRational, hi: &BigRational) -> bool {
        self.terms.iter().all(|t| {
            let (a, b) = (t.value(lo), t.value(hi));
            !a.is_zero() && !b.is_zero() && a.is_positive() == b.is_positive()
        })
    }
}

impl fmt::Display for LogLinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            let sep = if k == 0 { "" } else { " + " };
            write!(f, "{sep}{} log|({})u + ({})|", t.b, t.slope, t.offset)?;
        }
        Ok(())
    }
}

/// Certified precision ceiling derived from a lower bound for nonzero
/// linear forms in logarithms. All quantities use natural logarithms.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionBudget {
    pub b: BigInt,
    pub log_h: Dyadic,
    pub a_bound: Dyadic,
    pub e_bound: Dyadic,
    pub d_bound: Dyadic,
    pub rho: Dyadic,
}

impl PrecisionBudget {
    pub fn new(form: &LogLinForm) -> Self {
        let b = form.coefficient_bound().max(BigInt::one());
        let log_h = form
            .terms
            .iter()
            .flat_map(|t| [height(&t.slope).to_f64(), height(&t.offset).to_f64()])
            .fold(1.0f64, f64::max);
        Self::from_parts(form.terms.len().max(1), b, log_h)
    }

    /// `m` counts the log terms, `log_h` is the largest height (at least 1).
    pub fn from_parts(m: usize, b: BigInt, log_h: f64) -> Self {
        let mf = m as f64;
        let ln_b = ln_big(&b);
        let inner = 2.0 * mf.ln() + (mf - 1.0) * 16f64.ln() + 2.0 * ln_b + (6.0 * mf - 2.0) * log_h;
        let a = inner.max(1.0).powf(mf);
        let e = 1.4 * mf.powf(6.5) * 30f64.powf(mf + 3.0) * (1.0 + mf.ln()) * (1.0 + mf.ln() + ln_b) * a;
        let ln_x = mf.ln() + (mf + 2.0) * 2f64.ln() + ln_b + 2.0 * mf * log_h;
        let ln_8x = if ln_x > 40.0 { ln_x + 1e-12 } else { (8.0 + ln_x.exp()).ln() };
        let d = mf * mf * std::f64::consts::E + (mf + 2.0) * ln_8x;
        let rho = 1.443 * (d + (12.0 * mf).ln() + e);
        Self { b, log_h: up(log_h), a_bound: up(a), e_bound: up(e), d_bound: up(d), rho: up(rho) }
    }

    /// `ceil(rho)` in bits, saturating.
    pub fn ceiling_bits(&self) -> u64 {
        let r = self.rho.to_f64();
        if r.is_finite() && r < u64::MAX as f64 {
            r.ceil() as u64
        } else {
            u64::MAX
        }
    }
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().unwrap_or(f64::MAX).abs().ln()
    } else {
        let shift = bits - 60;
        (x >> shift as usize).to_f64().unwrap().abs().ln() + shift as f64 * 2f64.ln()
    }
}

fn up(x: f64) -> Dyadic {
    let x = if x.is_finite() { x } else { f64::MAX };
    Dyadic::from_f64((x * (1.0 + 1e-9) + 1.0).min(f64::MAX))
}

/// Limits precision for experiments; `None` means the certified ceiling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SignOptions {
    pub precision_cap_bits: Option<u64>,
}

impl SignOptions {
    fn ceiling(&self, budget: &PrecisionBudget) -> u64 {
        let c = budget.ceiling_bits();
        self.precision_cap_bits.map_or(c, |cap| cap.min(c))
    }
}

/// Builds the integer polynomial whose real roots are the critical points of `L`.
/// Normalized primitive with positive leading coefficient; zero if `L` is constant.
pub fn critical_poly(form: &LogLinForm) -> IntPoly {
    critical_poly_raw(form).primitive()
}

/// Same polynomial before content removal.
pub fn critical_poly_raw(form: &LogLinForm) -> IntPoly {
    let lin: Vec<(usize, IntPoly, BigInt)> = form
        .terms
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_constant())
        .map(|(i, t)| {
            let (a, c, _) = t.integral();
            (i, IntPoly::linear(a.clone(), c), a)
        })
        .collect();
    let mut g = IntPoly::zero();
    for (i, _, a) in &lin {
        let mut prod = IntPoly::constant(&form.terms[*i].b * a);
        for (j, l, _) in &lin {
            if j != i {
                prod = prod.mul(l);
            }
        }
        g = g.add(&prod);
    }
    g
}

/// Result of an exact vanishing test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
}

/// Refines `j` (a root of `p`) until no pole of `form` lies in `[lo, hi]`.
fn pole_free_refine(form: &LogLinForm, p: &IntPoly, j: &IsolatingInterval) -> Result<IsolatingInterval> {
    let mut j = j.clone();
    while !form.pole_free(&j.lo, &j.hi) {
        let half = j.width() / BigRational::from_integer(2.into());
        j = refine(p, &j, &half)?;
    }
    Ok(j)
}

/// Critical points of `L`.
#[derive(Clone, Debug)]
pub struct CriticalSet {
    pub g: IntPoly,
    pub squarefree: IntPoly,
    /// Sorted, disjoint, each free of poles.
    pub intervals: Vec<IsolatingInterval>,
}

impl CriticalSet {
    pub fn new(form: &LogLinForm) -> Result<Self> {
        let g = critical_poly(form);
        if g.is_zero() || g.degree() == Some(0) {
            return Ok(Self { squarefree: IntPoly::constant(BigInt::one()), g, intervals: Vec::new() });
        }
        let squarefree = squarefree_part(&g)?;
        let intervals = isolate_real_roots(&squarefree)?
            .iter()
            .map(|j| pole_free_refine(form, &squarefree, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { g, squarefree, intervals })
    }

    /// Which side of the rational `q` the `k`-th critical point lies on.
    /// `Equal` means the critical point is `q` itself.
    fn locate(&mut self, k: usize, q: &BigRational) -> Result<Ordering> {
        loop {
            let j = &self.intervals[k];
            if &j.hi <= q {
                return Ok(Ordering::Less);
            }
            if &j.lo >= q {
                return Ok(Ordering::Greater);
            }
            if sign_at(&self.squarefree, q) == 0 {
                return Ok(Ordering::Equal);
            }
            let half = j.width() / BigRational::from_integer(2.into());
            self.intervals[k] = refine(&self.squarefree, j, &half)?;
        }
    }
}

/// Decides whether `L` vanishes at the critical point isolated by `j`.
pub fn exact_zero_test(form: &LogLinForm, j: &IsolatingInterval) -> Result<ZeroTest> {
    let g = critical_poly(form);
    if g.degree().unwrap_or(0) == 0 {
        return Err(Error::NotACriticalPoint);
    }
    let p = squarefree_part(&g)?;
    let (slo, shi) = (sign_at(&p, &j.lo), sign_at(&p, &j.hi));
    if j.lo >= j.hi || slo == 0 || shi == 0 || slo == shi {
        return Err(Error::NotACriticalPoint);
    }
    let j = pole_free_refine(form, &p, j)?;
    let d = p.degree().unwrap();
    let lc = p.leading().unwrap().clone();

    // monic P(v) = lc^{d-1} p(v / lc)
    let mut lc_pow = vec![BigInt::one(); d + 1];
    for k in 1..=d {
        lc_pow[k] = &lc_pow[k - 1] * &lc;
    }
    let mut pc: Vec<BigInt> = (0..d).map(|k| &p.coeffs()[k] * &lc_pow[d - 1 - k]).collect();
    pc.push(BigInt::one());
    let big_p = IntPoly::new(pc);
    let ring = MonicRing { modulus: &big_p };

    // |N| = K |D| with N, D products of integral linear forms
    let mut num = ring.one();
    let mut den = ring.one();
    let mut k_num = BigInt::one();
    let mut k_den = BigInt::one();
    let (mut pos_deg, mut neg_deg) = (0u64, 0u64);
    let mut sign = 1i8;
    for t in &form.terms {
        let e = t.b.abs().to_u64().ok_or_else(|| Error::Internal("log coefficient too large".into()))?;
        if t.is_constant() {
            let c = t.offset.abs();
            // |c|^b moves to K with the opposite exponent
            if t.b.is_positive() {
                k_num *= c.denom().pow(e as u32);
                k_den *= c.numer().pow(e as u32);
            } else {
                k_num *= c.numer().pow(e as u32);
                k_den *= c.denom().pow(e as u32);
            }
            continue;
        }
        let (a, c, nu) = t.integral();
        if t.value(&j.lo).is_negative() && e % 2 == 1 {
            sign = -sign;
        }
        // a u + c = (a v + c lc) / lc
        let lin = ring.reduce(IntPoly::linear(a, c * &lc));
        let pw = ring.pow(&lin, e);
        if t.b.is_positive() {
            num = ring.mul(&num, &pw);
            pos_deg += e;
            k_num *= nu.pow(e as u32);
        } else {
            den = ring.mul(&den, &pw);
            neg_deg += e;
            k_den *= nu.pow(e as u32);
        }
    }
    let c = pos_deg.min(neg_deg);
    let left = num.scale(&(k_den * lc.pow((neg_deg - c) as u32)));
    let mut right = den.scale(&(k_num * lc.pow((pos_deg - c) as u32)));
    if sign < 0 {
        right = right.scale(&BigInt::from(-1));
    }
    let e_poly = left.sub(&right);
    if e_poly.is_zero() {
        return Ok(ZeroTest::Zero);
    }
    let h = gcd(&big_p, &e_poly);
    if h.degree() == Some(0) {
        return Ok(ZeroTest::NonZero);
    }
    let lcq = BigRational::from_integer(lc);
    let (vlo, vhi) = (&j.lo * &lcq, &j.hi * &lcq);
    if sign_at(&h, &vlo) * sign_at(&h, &vhi) < 0 {
        Ok(ZeroTest::Zero)
    } else {
        Ok(ZeroTest::NonZero)
    }
}

/// Arithmetic in `Z[v]/(P)` for monic `P`.
struct MonicRing<'a> {
    modulus: &'a IntPoly,
}

impl MonicRing<'_> {
    fn one(&self) -> IntPoly {
        IntPoly::constant(BigInt::one())
    }

    fn reduce(&self, a: IntPoly) -> IntPoly {
        let d = self.modulus.degree().unwrap();
        let m = self.modulus.coeffs();
        let mut c = a.coeffs().to_vec();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - d;
            for k in 0..d {
                c[shift + k] -= &top * &m[k];
            }
        }
        IntPoly::new(c)
    }

    fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        self.reduce(a.mul(b))
    }

    fn pow(&self, a: &IntPoly, mut e: u64) -> IntPoly {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Sign of `L` at the critical point isolated by `j`.
pub fn sign_at_critical_point(
    form: &LogLinForm,
    j: &IsolatingInterval,
    budget: &PrecisionBudget,
    opts: &SignOptions,
) -> Result<i8> {
    let g = critical_poly(form);
    if g.degree().unwrap_or(0) == 0 {
        return Err(Error::NotACriticalPoint);
    }
    let p = squarefree_part(&g)?;
    let ceiling = opts.ceiling(budget);
    let mut j = pole_free_refine(form, &p, j)?;
    let mut bits = START_BITS;
    let mut tested = false;
    loop {
        if bits > ceiling {
            return Err(Error::BudgetExceeded { bits, ceiling });
        }
        let w = BigRational::new(BigInt::one(), BigInt::one() << (bits / 2 + 8) as usize);
        if j.width() > w {
            j = refine(&p, &j, &w)?;
        }
        match form.enclose(&j.lo, &j.hi, bits)?.sign() {
            BallSign::Positive => return Ok(1),
            BallSign::Negative => return Ok(-1),
            BallSign::Straddles => {}
        }
        if !tested {
            tested = true;
            if exact_zero_test(form, &j)? == ZeroTest::Zero {
                return Ok(0);
            }
        }
        bits *= 2;
    }
}

/// Exact sign of `sum e_k log|q_k|` for nonzero rationals `q_k`.
pub fn log_combination_sign(terms: &[(BigInt, BigRational)], max_bits: u64) -> Result<i8> {
    let terms: Vec<_> =
        terms.iter().filter(|(e, q)| !e.is_zero() && !q.abs().is_one()).map(|(e, q)| (e.clone(), q.abs())).collect();
    if terms.iter().any(|(_, q)| q.is_zero()) {
        return Err(Error::Domain("logarithm of zero".into()));
    }
    if terms.is_empty() {
        return Ok(0);
    }
    let ball_at = |bits: u64| -> Result<BallSign> {
        let mut acc = Ball::zero();
        let extra: BigInt = terms.iter().map(|(e, _)| e.abs()).sum();
        for (e, q) in &terms {
            acc = &acc + &log_ball(q, bits + extra.bits() + 2)?.scale(e);
        }
        Ok(acc.sign())
    };
    let mut bits = START_BITS;
    let mut tested = false;
    loop {
        match ball_at(bits)? {
            BallSign::Positive => return Ok(1),
            BallSign::Negative => return Ok(-1),
            BallSign::Straddles => {}
        }
        if !tested {
            tested = true;
            if multiplicative_relation_holds(&terms) {
                return Ok(0);
            }
        }
        bits *= 2;
        if bits > max_bits {
            return Err(Error::BudgetExceeded { bits, ceiling: max_bits });
        }
    }
}

/// `prod |q_k|^{e_k} == 1`, decided over a coprime base of all numerators and denominators.
pub fn multiplicative_relation_holds(terms: &[(BigInt, BigRational)]) -> bool {
    let mut base: Vec<BigInt> = Vec::new();
    for (_, q) in terms {
        for x in [q.numer().abs(), q.denom().clone()] {
            if !x.is_one() && !x.is_zero() {
                base.push(x);
            }
        }
    }
    let base = coprime_base(base);
    base.iter().all(|p| {
        let mut total = BigInt::zero();
        for (e, q) in terms {
            let v = valuation(&q.numer().abs(), p) as i64 - valuation(q.denom(), p) as i64;
            total += e * BigInt::from(v);
        }
        total.is_zero()
    })
}

/// Pairwise coprime integers `> 1` generating every input multiplicatively.
pub fn coprime_base(mut xs: Vec<BigInt>) -> Vec<BigInt> {
    xs.retain(|x| x > &BigInt::one());
    loop {
        let mut changed = false;
        'outer: for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                if xs[i] == xs[j] {
                    xs.swap_remove(j);
                    changed = true;
                    break 'outer;
                }
                let g = xs[i].gcd(&xs[j]);
                if !g.is_one() {
                    let a = &xs[i] / &g;
                    let b = &xs[j] / &g;
                    xs.swap_remove(j);
                    xs.swap_remove(i);
                    xs.extend([a, b, g].into_iter().filter(|x| x > &BigInt::one()));
                    changed = true;
                    break 'outer;
                }
            }
        }
        if !changed {
            xs.sort();
            return xs;
        }
    }
}

fn valuation(x: &BigInt, p: &BigInt) -> u64 {
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    v
}

/// An end of an interval on the real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => write!(f, "-inf"),
            Endpoint::Finite(q) => write!(f, "{q}"),
            Endpoint::PosInf => write!(f, "+inf"),
        }
    }
}

/// Direction of approach to an endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Sign of `lim L(u)` as `u` approaches a pole or an infinite end.
pub fn endpoint_limit_sign(form: &LogLinForm, endpoint: &Endpoint, _side: Side) -> Result<i8> {
    match endpoint {
        Endpoint::Finite(q) => match form.is_pole(q) {
            Some(i) => Ok(-sign_of(&form.terms[i].b)),
            None => Err(Error::NotAPole(q.to_string())),
        },
        _ => {
            let c_inf: BigInt = form.terms.iter().filter(|t| !t.is_constant()).map(|t| &t.b).sum();
            if !c_inf.is_zero() {
                return Ok(sign_of(&c_inf));
            }
            let consts: Vec<_> = form
                .terms
                .iter()
                .map(|t| {
                    let q = if t.is_constant() { t.offset.clone() } else { t.slope.clone() };
                    (t.b.clone(), q)
                })
                .collect();
            log_combination_sign(&consts, 1 << 24)
        }
    }
}

/// Sign of `L` at a rational point that is not a pole.
pub fn sign_at_rational(form: &LogLinForm, q: &BigRational) -> Result<i8> {
    let terms: Vec<_> = form.terms.iter().map(|t| (t.b.clone(), t.value(q))).collect();
    if terms.iter().any(|(_, v)| v.is_zero()) {
        return Err(Error::Domain(format!("{q} is a pole")));
    }
    log_combination_sign(&terms, 1 << 24)
}

/// Limit sign at an interval end: pole rule, behavior at infinity, or the
/// value itself at an ordinary point.
pub fn boundary_sign(form: &LogLinForm, endpoint: &Endpoint, side: Side) -> Result<i8> {
    match endpoint {
        Endpoint::Finite(q) if form.is_pole(q).is_none() => sign_at_rational(form, q),
        _ => endpoint_limit_sign(form, endpoint, side),
    }
}

fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// Per-interval tally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalCount {
    pub sign_changes: u64,
    pub degenerate: u64,
    /// Left limit, interior critical values, right limit.
    pub signs: Vec<i8>,
    pub critical_points: Vec<IsolatingInterval>,
}

impl IntervalCount {
    pub fn total(&self) -> u64 {
        self.sign_changes + self.degenerate
    }
}

/// Counts roots of `L` in the open interval `(lo, hi)`, which must be free of poles.
pub fn count_roots_in_interval(
    form: &LogLinForm,
    crit: &mut CriticalSet,
    lo: &Endpoint,
    hi: &Endpoint,
    budget: &PrecisionBudget,
    opts: &SignOptions,
) -> Result<IntervalCount> {
    let mut signs = vec![boundary_sign(form, lo, Side::Right)?];
    let mut inside = Vec::new();
    for k in 0..crit.intervals.len() {
        if let Endpoint::Finite(q) = lo {
            if crit.locate(k, q)? != Ordering::Greater {
                continue;
            }
        }
        if let Endpoint::Finite(q) = hi {
            if crit.locate(k, q)? != Ordering::Less {
                continue;
            }
        }
        let j = crit.intervals[k].clone();
        signs.push(sign_at_critical_point(form, &j, budget, opts)?);
        inside.push(j);
    }
    signs.push(boundary_sign(form, hi, Side::Left)?);
    let sign_changes = signs.windows(2).filter(|w| w[0] * w[1] < 0).count() as u64;
    let degenerate = signs[1..signs.len() - 1].iter().filter(|&&s| s == 0).count() as u64;
    Ok(IntervalCount { sign_changes, degenerate, signs, critical_points: inside })
}

/// Number of sign changes of `L` seen on `samples` evenly spaced points of
/// `(lo, hi)`, ignoring points where the floating-point value is unreliable.
/// Returns `(changes, skipped)`.
pub fn sampled_sign_changes(form: &LogLinForm, lo: f64, hi: f64, samples: usize) -> (u64, u64) {
    let mut last = 0i8;
    let mut changes = 0;
    let mut skipped = 0;
    let scale: f64 = form.terms.iter().map(|t| t.b.to_f64().unwrap_or(0.0).abs()).sum();
    for k in 1..=samples {
        let u = lo + (hi - lo) * k as f64 / (samples + 1) as f64;
        let v = form.eval_f64(u);
        let mag: f64 = form
            .terms
            .iter()
            .map(|t| {
                let x = t.slope.to_f64().unwrap_or(0.0) * u + t.offset.to_f64().unwrap_or(0.0);
                t.b.to_f64().unwrap_or(0.0).abs() * x.abs().ln().abs().max(1.0)
            })
            .sum();
        if !v.is_finite() || v.abs() <= 1e-9 * (mag + scale) {
            skipped += 1;
            continue;
        }
        let s = if v > 0.0 { 1 } else { -1 };
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    (changes, skipped)
}

/// Checks a tally against sampled values of `L`.
///
/// Between consecutive entries of `tally.signs` the form is monotone, so each
/// piece may change sign at most once, and only when its end signs differ.
/// Samples whose floating-point value is unreliable are re-evaluated with a
/// ball; those still straddling zero are skipped. Critical points are refined
/// before cutting, and infinite ends are truncated to a finite window. Returns the number of samples that were checked.
pub fn verify_sign_pattern(
    form: &LogLinForm,
    tally: &IntervalCount,
    lo: &Endpoint,
    hi: &Endpoint,
    samples: usize,
) -> std::result::Result<u64, String> {
    let g = critical_poly(form);
    let mut crit = Vec::new();
    for j in &tally.critical_points {
        let tight = BigRational::new(BigInt::one(), BigInt::one() << 60u32) * (j.lo.abs() + BigInt::one());
        let r = refine(&g, j, &tight).map_err(|e| e.to_string())?;
        crit.push((r.lo.to_f64().unwrap_or(f64::NAN), r.hi.to_f64().unwrap_or(f64::NAN)));
    }
    let mids: Vec<f64> = crit.iter().map(|(a, b)| 0.5 * (a + b)).collect();
    let reach = mids
        .iter()
        .copied()
        .chain([lo, hi].iter().filter_map(|e| match e {
            Endpoint::Finite(q) => q.to_f64(),
            _ => None,
        }))
        .fold(1.0f64, |m, x| m.max(x.abs()));
    let window = 1e3 * (1.0 + reach);
    let end = |e: &Endpoint| match e {
        Endpoint::NegInf => -window,
        Endpoint::PosInf => window,
        Endpoint::Finite(q) => q.to_f64().unwrap_or(f64::NAN),
    };
    let mut cuts = vec![end(lo)];
    cuts.extend(mids);
    cuts.push(end(hi));
    let per_piece = (samples / (cuts.len() - 1)).max(16);
    let mut checked = 0u64;
    for (i, w) in cuts.windows(2).enumerate() {
        let (sl, sr) = (tally.signs[i], tally.signs[i + 1]);
        let mut seen: Vec<i8> = Vec::new();
        for k in 1..=per_piece {
            let u = w[0] + (w[1] - w[0]) * k as f64 / (per_piece + 1) as f64;
            if crit.iter().any(|&(a, b)| a <= u && u <= b) {
                continue;
            }
            if let Some(s) = sample_sign(form, u) {
                checked += 1;
                if seen.last() != Some(&s) {
                    seen.push(s);
                }
            }
        }
        let ok = match (sl, sr) {
            (a, b) if a == b && a != 0 => seen.iter().all(|&s| s == a),
            (0, b) | (b, 0) if b != 0 => seen.iter().all(|&s| s == b),
            (0, 0) => seen.is_empty(),
            (a, b) => seen.len() <= 1 || (seen.len() == 2 && seen[0] == a && seen[1] == b),
        };
        if !ok {
            return Err(format!(
                "piece {i} ({:.6e}, {:.6e}) has end signs {sl}, {sr} but samples show {seen:?}",
                w[0], w[1]
            ));
        }
    }
    Ok(checked)
}

fn sample_sign(form: &LogLinForm, u: f64) -> Option<i8> {
    if !u.is_finite() {
        return None;
    }
    let v = form.eval_f64(u);
    let mag: f64 = form
        .terms
        .iter()
        .map(|t| {
            let x = t.slope.to_f64().unwrap_or(0.0) * u + t.offset.to_f64().unwrap_or(0.0);
            t.b.to_f64().unwrap_or(0.0).abs() * (1.0 + x.abs().ln().abs())
        })
        .sum();
    if v.is_finite() && v.abs() > 1e-6 * mag {
        return Some(if v > 0.0 { 1 } else { -1 });
    }
    let q = BigRational::from_float(u)?;
    if form.is_pole(&q).is_some() {
        return None;
    }
    match form.eval_ball(&q, 128).ok()?.sign() {
        BallSign::Positive => Some(1),
        BallSign::Negative => Some(-1),
        BallSign::Straddles => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn term(b: i64, s: i64, o: i64) -> LogTerm {
        LogTerm::new(b.into(), rat(s, 1), rat(o, 1))
    }

    fn form(ts: &[(i64, i64, i64)]) -> LogLinForm {
        LogLinForm::new(ts.iter().map(|&(b, s, o)| term(b, s, o)).collect()).unwrap()
    }

    fn quartic_form() -> LogLinForm {
        let d = 27281;
        let b: Vec<BigInt> = [54667, -16978, -43727, 5123, -10129].iter().map(|&x| BigInt::from(x)).collect();
        let g = [(-84556, 39898), (-125680, 47210), (-126754, 42139), (-114296, 20845)]
            .iter()
            .map(|&(a, c)| (rat(a, d), rat(c, d)))
            .collect::<Vec<_>>();
        LogLinForm::from_gale(&b, &g).unwrap()
    }

    fn opts() -> SignOptions {
        SignOptions::default()
    }

    #[test]
    fn single_log_has_constant_g() {
        let l = form(&[(1, 1, 0)]);
        let g = critical_poly(&l);
        assert_eq!(g.degree(), Some(0));
        assert!(CriticalSet::new(&l).unwrap().intervals.is_empty());
    }

    #[test]
    fn known_quartic() {
        let g = critical_poly(&quartic_form());
        let expected = [
            "-837930167824219163155",
            "13833463598904597755876",
            "-78932164016242868100268",
            "160578806134338659719072",
            "-85015812446550320118784",
        ];
        let expected = IntPoly::new(expected.iter().map(|s| s.parse().unwrap()).collect());
        assert_eq!(g, expected.primitive());
        assert_eq!(CriticalSet::new(&quartic_form()).unwrap().intervals.len(), 2);
    }

    #[test]
    fn opposite_poles_constant_derivative() {
        let l = form(&[(2, 1, 1), (-2, 1, -1)]);
        let g = critical_poly(&l);
        assert_eq!(g.degree(), Some(0));
        assert_eq!(critical_poly_raw(&l), IntPoly::from_i64(&[-4]));
    }

    #[test]
    fn no_critical_points_for_constant_g() {
        let l = form(&[(1, 1, 3), (1, 1, -1), (-2, 1, 1)]);
        assert_eq!(critical_poly(&l).degree(), Some(0));
    }

    #[test]
    fn rational_critical_point_signs() {
        // 2 log|u+2| - log|u+1|: critical point 0, value log 4
        let l = form(&[(2, 1, 2), (-1, 1, 1)]);
        let b = PrecisionBudget::new(&l);
        let c = CriticalSet::new(&l).unwrap();
        assert_eq!(c.intervals.len(), 1);
        assert!(c.intervals[0].contains(&rat(0, 1)));
        assert_eq!(sign_at_critical_point(&l, &c.intervals[0], &b, &opts()).unwrap(), 1);
        assert_eq!(exact_zero_test(&l, &c.intervals[0]).unwrap(), ZeroTest::NonZero);

        // 2 log|u+2| - 4 log|u+1|: critical point -3, value -4 log 2
        let l = form(&[(2, 1, 2), (-4, 1, 1)]);
        let c = CriticalSet::new(&l).unwrap();
        assert!(c.intervals[0].contains(&rat(-3, 1)));
        assert_eq!(sign_at_critical_point(&l, &c.intervals[0], &PrecisionBudget::new(&l), &opts()).unwrap(), -1);
    }

    #[test]
    fn zero_at_rational_critical_point() {
        // log|u-2| + log|u-8| - 2 log|u-4|, checked against exact rational evaluation
        let l = form(&[(1, 1, -2), (1, 1, -8), (-2, 1, -4)]);
        let c = CriticalSet::new(&l).unwrap();
        for j in &c.intervals {
            let t = exact_zero_test(&l, j).unwrap();
            let p = squarefree_part(&critical_poly(&l)).unwrap();
            if p.degree() == Some(1) {
                let r = -BigRational::new(p.coeffs()[0].clone(), p.coeffs()[1].clone());
                let prod = l.terms().iter().fold(BigRational::one(), |acc, t| {
                    let v = t.value(&r).abs();
                    let e = t.b.to_i32().unwrap();
                    acc * if e >= 0 {
                        num_traits::pow(v, e as usize)
                    } else {
                        num_traits::pow(v.recip(), (-e) as usize)
                    }
                });
                assert_eq!(t == ZeroTest::Zero, prod.is_one());
            }
        }
    }

    #[test]
    fn degenerate_zero_detected() {
        // log|9 - u^2| - log 9 vanishes at its critical point 0
        let l = LogLinForm::new(vec![term(1, 1, 3), term(1, -1, 3), LogTerm::new((-1).into(), rat(0, 1), rat(9, 1))])
            .unwrap();
        let c = CriticalSet::new(&l).unwrap();
        assert_eq!(c.intervals.len(), 1);
        assert_eq!(exact_zero_test(&l, &c.intervals[0]).unwrap(), ZeroTest::Zero);
        let b = PrecisionBudget::new(&l);
        assert_eq!(sign_at_critical_point(&l, &c.intervals[0], &b, &opts()).unwrap(), 0);
    }

    #[test]
    fn algebraic_critical_signs_match_floats() {
        let l = LogLinForm::new(vec![term(1, 1, 0), term(1, 1, -4), term(-1, 2, -2)]).unwrap();
        let c = CriticalSet::new(&l).unwrap();
        let b = PrecisionBudget::new(&l);
        for j in &c.intervals {
            let mid = j.midpoint().to_f64().unwrap();
            let s = sign_at_critical_point(&l, j, &b, &opts()).unwrap();
            let v = l.eval_f64(mid);
            assert_eq!(s, if v > 0.0 { 1 } else { -1 }, "value {v}");
        }
    }

    #[test]
    fn limits() {
        let l = form(&[(1, 1, 0)]);
        assert_eq!(endpoint_limit_sign(&l, &Endpoint::Finite(rat(0, 1)), Side::Right).unwrap(), -1);
        assert_eq!(endpoint_limit_sign(&quartic_form(), &Endpoint::PosInf, Side::Left).unwrap(), -1);
        let l = form(&[(1, 1, 0), (-1, 1, -1)]);
        assert_eq!(endpoint_limit_sign(&l, &Endpoint::PosInf, Side::Left).unwrap(), 0);
        assert!(matches!(endpoint_limit_sign(&l, &Endpoint::Finite(rat(5, 1)), Side::Left), Err(Error::NotAPole(_))));
    }

    #[test]
    fn monotone_interval_has_one_root() {
        // log|u| on (0, inf)
        let l = form(&[(1, 1, 0)]);
        let mut c = CriticalSet::new(&l).unwrap();
        let b = PrecisionBudget::new(&l);
        let r =
            count_roots_in_interval(&l, &mut c, &Endpoint::Finite(rat(0, 1)), &Endpoint::PosInf, &b, &opts()).unwrap();
        assert_eq!((r.sign_changes, r.degenerate), (1, 0));
    }

    #[test]
    fn hand_sketched_interval() {
        // 2 log|u+2| - 4 log|u+1| on (-1, inf): +inf at -1, -inf at +inf, critical point -3 outside
        let l = form(&[(2, 1, 2), (-4, 1, 1)]);
        let mut c = CriticalSet::new(&l).unwrap();
        let b = PrecisionBudget::new(&l);
        let r =
            count_roots_in_interval(&l, &mut c, &Endpoint::Finite(rat(-1, 1)), &Endpoint::PosInf, &b, &opts()).unwrap();
        assert_eq!(r.signs, vec![1, -1]);
        assert_eq!(r.total(), 1);
        let (changes, _) = sampled_sign_changes(&l, -0.999, 50.0, 10_000);
        assert_eq!(changes, 1);
    }

    #[test]
    fn coincident_poles_rejected() {
        let r = LogLinForm::new(vec![term(1, 1, 1), term(2, 2, 2)]);
        assert_eq!(r, Err(Error::CoincidentPoles(0, 1)));
    }

    #[test]
    fn coprime_relations() {
        let t = vec![(BigInt::from(2), rat(6, 1)), (BigInt::from(-1), rat(4, 1)), (BigInt::from(-2), rat(3, 1))];
        assert!(multiplicative_relation_holds(&t));
        let t = vec![(BigInt::from(1), rat(6, 1)), (BigInt::from(-1), rat(5, 1))];
        assert!(!multiplicative_relation_holds(&t));
        assert_eq!(log_combination_sign(&t, 1 << 16).unwrap(), 1);
        assert_eq!(coprime_base(vec![12.into(), 18.into()]), vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn budget_is_monotone() {
        let a = PrecisionBudget::from_parts(3, 10.into(), 2.0);
        let b = PrecisionBudget::from_parts(3, 20.into(), 2.0);
        let c = PrecisionBudget::from_parts(3, 10.into(), 3.0);
        assert!(a.rho <= b.rho && a.rho <= c.rho);
        assert!(a.e_bound > Dyadic::zero());
    }
}
