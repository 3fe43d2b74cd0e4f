//! Binomial systems `x^{a_j} = c_j`, solved through the Smith form of the
//! exponent matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rank_mod2, smith, IntMatrix};
use crate::logsign::log_combination_sign;

/// Number of roots of a binomial system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinomialCount {
    Finite(u64),
    Infinite,
}

/// `x^{a_j} = c_j` for `j = 1..n`; column `j` of `exponents` is `a_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialSystem {
    exponents: IntMatrix,
    rhs: Vec<BigRational>,
}

impl BinomialSystem {
    pub fn new(exponents: IntMatrix, rhs: Vec<BigRational>) -> Result<Self> {
        let n = exponents.rows();
        if exponents.cols() != n || rhs.len() != n {
            return Err(Error::Shape(format!(
                "{}x{} exponents with {} right-hand sides",
                exponents.rows(),
                exponents.cols(),
                rhs.len()
            )));
        }
        if rhs.iter().any(|c| c.is_zero()) {
            return Err(Error::Domain("zero right-hand side".into()));
        }
        Ok(Self { exponents, rhs })
    }

    pub fn exponents(&self) -> &IntMatrix {
        &self.exponents
    }

    pub fn rhs(&self) -> &[BigRational] {
        &self.rhs
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }
}

/// Roots in the positive orthant: 0, 1 or infinitely many.
pub fn count_positive_binomial(sys: &BinomialSystem) -> Result<BinomialCount> {
    if sys.rhs.iter().any(|c| c.is_negative()) {
        return Ok(BinomialCount::Finite(0));
    }
    let st = smith(&sys.exponents);
    let rank = st.rank();
    let n = sys.dim();
    if rank == n {
        return Ok(BinomialCount::Finite(1));
    }
    // y^S = c^V; zero diagonal rows need c'_i = 1
    for i in rank..n {
        let terms: Vec<(BigInt, BigRational)> = (0..n).map(|k| (st.v[(k, i)].clone(), sys.rhs[k].clone())).collect();
        if log_combination_sign(&terms, 1 << 24)? != 0 {
            return Ok(BinomialCount::Finite(0));
        }
    }
    Ok(BinomialCount::Infinite)
}

/// Roots in `(R*)^n`: 0 or `2^(n-r)` with `r` the rank of the exponents mod 2.
pub fn count_torus_binomial(sys: &BinomialSystem) -> Result<u64> {
    let n = sys.dim();
    if sys.exponents.det()?.is_zero() {
        return Err(Error::SingularExponents);
    }
    if n >= 64 {
        return Err(Error::Domain("dimension too large for a machine count".into()));
    }
    let st = smith(&sys.exponents);
    let diag = st.diagonal();
    for (i, d) in diag.iter().enumerate() {
        if d.is_odd() {
            continue;
        }
        // sign(c)^{V mod 2}, column i
        let negatives = (0..n).filter(|&k| st.v[(k, i)].is_odd() && sys.rhs[k].is_negative()).count();
        if negatives % 2 == 1 {
            return Ok(0);
        }
    }
    let r = rank_mod2(&sys.exponents);
    Ok(1u64 << (n - r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rows: &[&[i64]], c: &[i64]) -> BinomialSystem {
        BinomialSystem::new(
            IntMatrix::from_rows(rows),
            c.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn positive_one_dimensional() {
        assert_eq!(count_positive_binomial(&sys(&[&[2]], &[4])).unwrap(), BinomialCount::Finite(1));
        assert_eq!(count_positive_binomial(&sys(&[&[2]], &[-1])).unwrap(), BinomialCount::Finite(0));
    }

    #[test]
    fn positive_rank_deficient() {
        let a: &[&[i64]] = &[&[1, 1], &[1, 1]];
        assert_eq!(count_positive_binomial(&sys(a, &[2, 2])).unwrap(), BinomialCount::Infinite);
        assert_eq!(count_positive_binomial(&sys(a, &[2, 3])).unwrap(), BinomialCount::Finite(0));
    }

    #[test]
    fn torus_examples() {
        assert_eq!(count_torus_binomial(&sys(&[&[2]], &[4])).unwrap(), 2);
        assert_eq!(count_torus_binomial(&sys(&[&[2]], &[-4])).unwrap(), 0);
        assert_eq!(count_torus_binomial(&sys(&[&[2, 0], &[0, 3]], &[4, 8])).unwrap(), 2);
        assert_eq!(count_torus_binomial(&sys(&[&[1]], &[-4])).unwrap(), 1);
    }

    #[test]
    fn torus_requires_independent_exponents() {
        let a: &[&[i64]] = &[&[1, 1], &[1, 1]];
        assert_eq!(count_torus_binomial(&sys(a, &[2, 2])), Err(Error::SingularExponents));
    }
}
