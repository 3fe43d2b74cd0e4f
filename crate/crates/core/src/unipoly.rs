//! Univariate integer polynomials and certified real-root isolation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigfloat::Dyadic;
use crate::error::{Error, Result};

/// Integer polynomial, constant term first. The zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `a*x + b`
    pub fn linear(a: BigInt, b: BigInt) -> Self {
        Self::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn max_abs(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigInt::zero();
        Self::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(BigInt::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Pseudo-remainder of `self` by `d`: `lc(d)^k * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Result<Self> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lc).collect();
            for (j, c) in d.coeffs.iter().enumerate() {
                next[j + dr - dd] -= &lr * c;
            }
            r = Self::new(next);
        }
        Ok(r)
    }

    /// Exact quotient over the rationals, returned with the content removed.
    pub fn div_exact_primitive(&self, d: &Self) -> Result<Self> {
        let (q, r) = div_rem_rat(&to_rat(self), &to_rat(d))?;
        if r.iter().any(|c| !c.is_zero()) {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(from_rat_primitive(&q))
    }

    /// Exact rational value at `q`.
    pub fn eval(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// `d^deg * f(n/d)` as an integer, for `d > 0`.
    fn homogeneous_value(&self, n: &BigInt, d: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c * &dpow;
            dpow *= d;
        }
        acc
    }

    /// `p(a + w x)` with rational `a`, `w`, scaled to a primitive integer polynomial.
    pub fn compose_affine(&self, a: &BigRational, w: &BigRational) -> Self {
        let lin = [a.clone(), w.clone()];
        let mut acc: Vec<BigRational> = Vec::new();
        for c in self.coeffs.iter().rev() {
            acc = rat_mul(&acc, &lin);
            if acc.is_empty() {
                acc.push(BigRational::zero());
            }
            acc[0] += BigRational::from_integer(c.clone());
        }
        from_rat_primitive(&acc)
    }

    /// `x^deg * p(1/x)`
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// `p(x + 1)`
    pub fn taylor_shift_one(&self) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].clone();
                c[j] += t;
            }
        }
        Self::new(c)
    }

    pub fn sign_variations(&self) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for c in &self.coeffs {
            let s = sgn(c);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly{:?}", self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "u")?,
                1 => write!(f, "{mag}*u")?,
                _ if unit => write!(f, "u^{i}")?,
                _ => write!(f, "{mag}*u^{i}")?,
            }
        }
        Ok(())
    }
}

fn sgn(c: &BigInt) -> i8 {
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

fn to_rat(p: &IntPoly) -> Vec<BigRational> {
    p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn from_rat_primitive(c: &[BigRational]) -> IntPoly {
    let l = c.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    IntPoly::new(c.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect()).primitive()
}

fn rat_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn div_rem_rat(a: &[BigRational], d: &[BigRational]) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let mut d = d.to_vec();
    while d.last().is_some_and(|c| c.is_zero()) {
        d.pop();
    }
    if d.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut r = a.to_vec();
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    if r.len() < d.len() {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![BigRational::zero(); r.len() - d.len() + 1];
    let lc = d.last().unwrap().clone();
    while r.len() >= d.len() {
        let shift = r.len() - d.len();
        let f = r.last().unwrap() / &lc;
        for (j, c) in d.iter().enumerate() {
            r[j + shift] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    Ok((q, r))
}

/// Greatest common divisor, primitive with positive leading coefficient.
pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut x = a.primitive();
    let mut y = b.primitive();
    while !y.is_zero() {
        let r = x.pseudo_rem(&y).expect("nonzero divisor").primitive();
        x = y;
        y = r;
    }
    x.primitive()
}

/// Open interval `(lo, hi)` with rational endpoints isolating one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl IsolatingInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo < q && q < &self.hi
    }
}

/// Primitive square-free part with positive leading coefficient.
pub fn squarefree_part(f: &IntPoly) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = gcd(f, &f.derivative());
    if g.degree() == Some(0) {
        return Ok(f.primitive());
    }
    f.div_exact_primitive(&g)
}

/// Exact sign of `f(q)`.
pub fn sign_at(f: &IntPoly, q: &BigRational) -> i8 {
    sgn(&f.homogeneous_value(q.numer(), q.denom()))
}

/// `1 + max |coefficient|`, exceeding the modulus of every root.
pub fn cauchy_root_bound(f: &IntPoly) -> Result<BigRational> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(BigRational::from_integer(f.max_abs() + 1))
}

/// Descartes bound on the roots of `p` in `(lo, hi)`.
fn descartes_bound(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> usize {
    p.compose_affine(lo, &(hi - lo)).reversed().taylor_shift_one().sign_variations()
}

/// Disjoint sorted isolating intervals, one per distinct real root of `f`.
pub fn isolate_real_roots(f: &IntPoly) -> Result<Vec<IsolatingInterval>> {
    let p = squarefree_part(f)?;
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let bound = cauchy_root_bound(&p)?.to_integer();
    let b = BigRational::from_integer(BigInt::one() << bound.bits() as usize);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    let two = BigRational::from_integer(2.into());
    while let Some((lo, hi)) = stack.pop() {
        match descartes_bound(&p, &lo, &hi) {
            0 => {}
            1 => out.push(IsolatingInterval { lo, hi }),
            _ => {
                let w = &hi - &lo;
                let mut mid = (&lo + &hi) / &two;
                let mut k = 3u32;
                let mut flip = false;
                while sign_at(&p, &mid) == 0 {
                    let step = &w / BigRational::from_integer(BigInt::one() << k as usize);
                    mid = if flip { &mid - &step } else { &mid + &step };
                    flip = !flip;
                    k += 1;
                }
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Bisects `j` until its width is at most `width`.
pub fn refine(f: &IntPoly, j: &IsolatingInterval, width: &BigRational) -> Result<IsolatingInterval> {
    if !width.is_positive() {
        return Err(Error::Domain("refinement width must be positive".into()));
    }
    let p = squarefree_part(f)?;
    let mut lo = j.lo.clone();
    let mut hi = j.hi.clone();
    let slo = sign_at(&p, &lo);
    let shi = sign_at(&p, &hi);
    if lo >= hi || slo == 0 || shi == 0 || slo == shi {
        return Err(Error::NotIsolating(format!("({lo}, {hi})")));
    }
    let two = BigRational::from_integer(2.into());
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        let s = sign_at(&p, &mid);
        if s == 0 {
            let eps =
                (width / BigRational::from_integer(4.into())).min((&hi - &lo) / BigRational::from_integer(4.into()));
            return Ok(IsolatingInterval { lo: &mid - &eps, hi: &mid + &eps });
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(IsolatingInterval { lo, hi })
}

/// Positive dyadic below the gap between any two distinct complex roots
/// of the square-free part of `f`.
pub fn root_separation_bound(f: &IntPoly) -> Result<Dyadic> {
    let p = squarefree_part(f)?;
    let d = p.degree().unwrap_or(0);
    if d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    // sqrt(3) (d+1)^{-(2d+1)/2} H^{-(d-1)} with sqrt(3) dropped
    let lead = ((2 * d + 1) as f64 / 2.0 * ((d + 1) as f64).log2() + 1e-9).ceil() as i64;
    let h_bits = p.max_abs().bits() as i64;
    Ok(Dyadic::pow2(-(lead + (d as i64 - 1) * h_bits)))
}
