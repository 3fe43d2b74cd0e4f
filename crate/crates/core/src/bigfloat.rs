//! Dyadic ball arithmetic and certified logarithms.
//!
//! A [`Ball`] is a closed interval `[center - radius, center + radius]` with
//! dyadic endpoints. Every operation returns a ball containing all exact
//! results obtainable from points of the operand balls.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `mantissa * 2^exponent`, kept canonical (odd mantissa, or zero with exponent 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Self { mantissa: mantissa >> tz, exponent: exponent + tz as i64 }
    }

    pub fn zero() -> Self {
        Self { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    pub fn from_int(v: BigInt) -> Self {
        Self::new(v, 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Self::new(BigInt::one(), e)
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        Self::new(BigInt::from(m) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i8 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Self { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // keep 64 significant bits, then scale
        let bits = self.mantissa.bits() as i64;
        let shift = (bits - 64).max(0);
        let mut x = (&self.mantissa >> shift as usize).to_f64().unwrap_or(f64::NAN);
        let mut e = (self.exponent + shift).clamp(-4000, 4000);
        while e != 0 {
            let step = e.clamp(-600, 600);
            x *= 2f64.powi(step as i32);
            e -= step;
        }
        x
    }

    /// Largest multiple of `2^-prec` that is `<= self`.
    pub fn floor_to(&self, prec: i64) -> Self {
        self.round_to(prec, false)
    }

    /// Smallest multiple of `2^-prec` that is `>= self`.
    pub fn ceil_to(&self, prec: i64) -> Self {
        self.round_to(prec, true)
    }

    fn round_to(&self, prec: i64, up: bool) -> Self {
        if self.exponent >= -prec {
            return self.clone();
        }
        let shift = (-prec - self.exponent) as usize;
        let one = BigInt::one() << shift;
        let (q, r) = self.mantissa.div_mod_floor(&one);
        let q = if up && !r.is_zero() { q + 1 } else { q };
        Self::new(q, -prec)
    }

    /// Dyadic at or below `q`, within `2^-prec`.
    pub fn floor_rational(q: &BigRational, prec: i64) -> Self {
        let (num, den) = scaled(q, prec);
        Self::new(num.div_floor(&den), -prec)
    }

    /// Dyadic at or above `q`, within `2^-prec`.
    pub fn ceil_rational(q: &BigRational, prec: i64) -> Self {
        let (num, den) = scaled(q, prec);
        Self::new(num.div_ceil(&den), -prec)
    }

    /// Smallest `e` with `|self| <= 2^e`; `None` for zero.
    pub fn magnitude_bound(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let b = self.mantissa.abs().bits() as i64;
        let exact_pow = self.mantissa.abs().is_one();
        Some(self.exponent + if exact_pow { 0 } else { b })
    }
}

fn scaled(q: &BigRational, prec: i64) -> (BigInt, BigInt) {
    if prec >= 0 {
        (q.numer() << prec as usize, q.denom().clone())
    } else {
        (q.numer().clone(), q.denom() << (-prec) as usize)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &rhs.mantissa << (rhs.exponent - e) as usize;
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// Outcome of a sign query on a ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallSign {
    Negative,
    Straddles,
    Positive,
}

/// Closed dyadic ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    center: Dyadic,
    radius: Dyadic,
}

impl Ball {
    pub fn new(center: Dyadic, radius: Dyadic) -> Result<Self> {
        if radius.signum() < 0 {
            return Err(Error::Domain("negative ball radius".into()));
        }
        Ok(Self { center, radius })
    }

    pub fn exact(center: Dyadic) -> Self {
        Self { center, radius: Dyadic::zero() }
    }

    pub fn zero() -> Self {
        Self::exact(Dyadic::zero())
    }

    /// Ball of radius at most `2^-prec` around a rational.
    pub fn from_rational(q: &BigRational, prec: i64) -> Self {
        let lo = Dyadic::floor_rational(q, prec);
        if lo.to_rational() == *q {
            return Self::exact(lo);
        }
        Self { center: lo, radius: Dyadic::pow2(-prec) }
    }

    /// Smallest ball containing the closed interval `[lo, hi]`.
    pub fn from_bounds(lo: &Dyadic, hi: &Dyadic) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let sum = lo + hi;
        let center = Dyadic::new(sum.mantissa().clone(), sum.exponent() - 1);
        let radius = hi - &center;
        Self { center, radius }
    }

    pub fn center(&self) -> &Dyadic {
        &self.center
    }

    pub fn radius(&self) -> &Dyadic {
        &self.radius
    }

    pub fn lower(&self) -> Dyadic {
        &self.center - &self.radius
    }

    pub fn upper(&self) -> Dyadic {
        &self.center + &self.radius
    }

    pub fn sign(&self) -> BallSign {
        if self.lower().signum() > 0 {
            BallSign::Positive
        } else if self.upper().signum() < 0 {
            BallSign::Negative
        } else {
            BallSign::Straddles
        }
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        let lo = self.lower().to_rational();
        let hi = self.upper().to_rational();
        &lo <= q && q <= &hi
    }

    /// Smallest ball containing both operands.
    pub fn hull(&self, other: &Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Ball::from_bounds(&lo, &hi)
    }

    pub fn scale(&self, k: &BigInt) -> Ball {
        let k = Dyadic::from_int(k.clone());
        Ball { center: &self.center * &k, radius: &self.radius * &k.abs() }
    }

    /// Rounds the center to a multiple of `2^-prec`, widening the radius.
    pub fn round(&self, prec: i64) -> Ball {
        let c = self.center.floor_to(prec);
        let slack = &self.center - &c;
        Ball { center: c, radius: &self.radius + &slack }
    }
}

impl Add for &Ball {
    type Output = Ball;
    fn add(self, rhs: &Ball) -> Ball {
        Ball { center: &self.center + &rhs.center, radius: &self.radius + &rhs.radius }
    }
}

impl Sub for &Ball {
    type Output = Ball;
    fn sub(self, rhs: &Ball) -> Ball {
        Ball { center: &self.center - &rhs.center, radius: &self.radius + &rhs.radius }
    }
}

impl Mul for &Ball {
    type Output = Ball;
    fn mul(self, rhs: &Ball) -> Ball {
        let r = &(&(&self.center.abs() * &rhs.radius) + &(&rhs.center.abs() * &self.radius))
            + &(&self.radius * &rhs.radius);
        Ball { center: &self.center * &rhs.center, radius: r }
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {}]", self.center, self.radius)
    }
}

/// Fixed-point value `v * 2^-w` with truncating arithmetic.
struct Fixed {
    w: usize,
}

impl Fixed {
    /// Product truncated toward zero.
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let p = a * b;
        if p.is_negative() {
            -((-p) >> self.w)
        } else {
            p >> self.w
        }
    }

    /// `2 * atanh(z)` for a fixed-point `z` with `|z| <= 1/3`.
    /// Returns the value and the number of series terms used.
    fn two_atanh(&self, z: &BigInt) -> (BigInt, u64) {
        let z2 = self.mul(z, z);
        let mut pow = z.clone();
        let mut sum = BigInt::zero();
        let mut k: u64 = 0;
        while !pow.is_zero() {
            sum += &pow / BigInt::from(2 * k + 1);
            pow = self.mul(&pow, &z2);
            k += 1;
        }
        (sum << 1, k)
    }
}

/// Ball containing `log(x)` with radius at most `2^-abs_err_bits`.
pub fn log_ball(x: &BigRational, abs_err_bits: u64) -> Result<Ball> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("logarithm of non-positive value {x}")));
    }
    if abs_err_bits == 0 {
        return Err(Error::Domain("abs_err_bits must be at least 1".into()));
    }
    if x.is_one() {
        return Ok(Ball::zero());
    }
    // x = 2^k * y with y in [3/4, 3/2)
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let y = loop {
        let y = shift_rational(x, -k);
        if y < BigRational::new(3.into(), 4.into()) {
            k -= 1;
        } else if y >= BigRational::new(3.into(), 2.into()) {
            k += 1;
        } else {
            break y;
        }
    };
    let z = (&y - BigRational::one()) / (&y + BigRational::one());

    let k_bits = 64 - k.unsigned_abs().leading_zeros() as u64;
    let mut w = abs_err_bits + 24 + k_bits + 2 * (64 - abs_err_bits.leading_zeros() as u64);
    loop {
        let fx = Fixed { w: w as usize };
        let z_fixed = (z.numer() << (w as usize)).div_floor(z.denom());
        let (log_y, terms_y) = fx.two_atanh(&z_fixed);
        let third = (BigInt::one() << (w as usize)) / BigInt::from(3);
        let (ln2, terms_2) = fx.two_atanh(&third);

        // error of each two_atanh in ulps: 2 * (2.2 * terms + 5), rounded up
        let err_y = 5 * terms_y + 12;
        let err_2 = 5 * terms_2 + 12;
        let err_ulps = BigInt::from(err_y) + BigInt::from(k.unsigned_abs()) * BigInt::from(err_2);

        let radius = Dyadic::new(err_ulps, -(w as i64));
        if radius <= Dyadic::pow2(-(abs_err_bits as i64)) {
            let center = Dyadic::new(log_y + ln2 * BigInt::from(k), -(w as i64));
            return Ok(Ball { center, radius });
        }
        w += 16;
    }
}

fn shift_rational(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::new(x.numer() << e as usize, x.denom().clone())
    } else {
        BigRational::new(x.numer().clone(), x.denom() << (-e) as usize)
    }
}
