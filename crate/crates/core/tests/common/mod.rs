//! Independent reference implementations used as test oracles, plus random
//! instance generators. Nothing here calls into the library's algorithms.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

// ---------------------------------------------------------------- Sturm

type RPoly = Vec<BigRational>; // constant term first

fn trim(p: &mut RPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn rem(a: &RPoly, b: &RPoly) -> RPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let f = r.last().unwrap() / b.last().unwrap();
        for (i, c) in b.iter().enumerate() {
            r[i + k] -= &f * c;
        }
        trim(&mut r);
    }
    r
}

fn sturm_chain(f: &[BigInt]) -> Vec<RPoly> {
    let mut p0: RPoly = f.iter().cloned().map(BigRational::from_integer).collect();
    trim(&mut p0);
    let mut p1: RPoly = p0.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect();
    trim(&mut p1);
    let mut chain = vec![p0];
    while !p1.is_empty() {
        let r = rem(chain.last().unwrap(), &p1);
        chain.push(p1);
        p1 = r.into_iter().map(|c| -c).collect();
    }
    chain
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let s: Vec<i32> = signs.filter(|&s| s != 0).collect();
    s.windows(2).filter(|w| w[0] != w[1]).count()
}

fn lead_sign(p: &RPoly, at_neg_inf: bool) -> i32 {
    let s = if p.last().unwrap().is_positive() { 1 } else { -1 };
    if at_neg_inf && (p.len() - 1) % 2 == 1 {
        -s
    } else {
        s
    }
}

fn sign_at(p: &RPoly, x: &BigRational) -> i32 {
    let v = p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c);
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Distinct real roots of `f` (constant term first): (negative, zero?, positive).
pub fn sturm_counts(f: &[BigInt]) -> (usize, bool, usize) {
    let root_at_zero = f.first().is_none_or(Zero::is_zero);
    let lead = f.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
    let chain = sturm_chain(&f[lead..]);
    let zero = BigRational::zero();
    let v_neg = variations(chain.iter().map(|p| lead_sign(p, true)));
    let v_pos = variations(chain.iter().map(|p| lead_sign(p, false)));
    let v_zero = variations(chain.iter().map(|p| sign_at(p, &zero)));
    // zero is no longer a root, so both counts are over open intervals
    let neg = v_neg - v_zero;
    let pos = v_zero - v_pos;
    (neg, root_at_zero, pos)
}

// ---------------------------------------------------------------- linear algebra

/// Gauss-Jordan with largest-magnitude pivoting.
pub fn naive_rref(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows).filter(|&i| !a[i][c].is_zero()).max_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
        let Some(p) = best else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pr = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    a
}

pub fn det_rat(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            let pr = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pr) {
                *x -= &f * y;
            }
        }
    }
    det
}

pub fn det_int(m: &[Vec<i64>]) -> BigInt {
    let r: Vec<Vec<BigRational>> = m.iter().map(|row| row.iter().map(|&v| q(v, 1)).collect()).collect();
    det_rat(&r).to_integer()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// gcd of all k x k minors, k = 1..min(rows, cols).
pub fn determinantal_divisors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m[0].len();
    (1..=rows.min(cols))
        .map(|k| {
            let mut g = BigInt::zero();
            for rs in combinations(rows, k) {
                for cs in combinations(cols, k) {
                    let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                    g = g.gcd(&det_int(&sub));
                }
            }
            g
        })
        .collect()
}

pub fn rank_mod2_bits(m: &[Vec<i64>]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for row in m {
        let mut v: u64 = row.iter().enumerate().fold(0, |acc, (j, &x)| acc | ((x.rem_euclid(2) as u64) << j));
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Torus roots of `x^{a_j} = c_j` (column j of `a`), by checking every sign
/// vector; `a` must be nonsingular.
pub fn binomial_torus_bruteforce(a: &[Vec<i64>], c: &[i64]) -> u64 {
    let n = a.len();
    let mut count = 0;
    for mask in 0u32..(1 << n) {
        let ok = (0..n).all(|j| {
            let neg = (0..n).filter(|&k| mask >> k & 1 == 1 && a[k][j].rem_euclid(2) == 1).count();
            (neg % 2 == 1) == (c[j] < 0)
        });
        if ok {
            count += 1;
        }
    }
    count
}

// ---------------------------------------------------------------- logarithms

/// Rational enclosure of `ln x` for `x > 0` from the alternating series of
/// `ln(1 + t)`, `|t| <= 1/2`, and `ln 2 = sum 2^-k / k`.
pub fn ln_enclosure(x: &BigRational, terms: usize) -> (BigRational, BigRational) {
    let two = q(2, 1);
    let half = q(1, 2);
    let mut y = x.clone();
    let mut k: i64 = 0;
    while y > q(3, 2) {
        y /= &two;
        k += 1;
    }
    while y < q(3, 4) {
        y *= &two;
        k -= 1;
    }
    // y in [3/4, 3/2]: ln(1 + t), |t| <= 1/2
    let t = &y - BigRational::one();
    let mut s = BigRational::zero();
    let mut p = t.clone();
    for i in 1..=terms {
        let term = &p / BigRational::from_integer(i.into());
        if i % 2 == 1 {
            s += term;
        } else {
            s -= term;
        }
        p *= &t;
    }
    // |tail| <= |t|^{N+1} / (N+1) / (1 - |t|)
    let tail = p.abs() / BigRational::from_integer((terms + 1).into()) * &two;
    let mut ln2 = BigRational::zero();
    let mut hp = half.clone();
    for i in 1..=terms {
        ln2 += &hp / BigRational::from_integer(i.into());
        hp *= &half;
    }
    let ln2_tail = &hp * &two;
    let kk = BigRational::from_integer(k.into());
    let centre = &s + &kk * &ln2;
    let err = &tail + kk.abs() * &ln2_tail;
    let (lo, hi) = (&centre - &err, &centre + &err);
    (lo, hi)
}

// ---------------------------------------------------------------- random instances

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, h: i64) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-h..=h)).collect()).collect()
}

/// `count` distinct integer points in `[lo, hi]^n`.
pub fn random_points(r: &mut ChaCha8Rng, n: usize, count: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = Vec::new();
    while pts.len() < count {
        let p: Vec<i64> = (0..n).map(|_| r.gen_range(lo..=hi)).collect();
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
