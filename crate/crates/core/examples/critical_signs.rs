//! Signs of `L` at its critical points, decided exactly.
//!
//! `cargo run --example critical_signs`

use circuit_roots::logsign::{
    count_roots_in_interval, exact_zero_test, sign_at_critical_point, CriticalSet, Endpoint, LogLinForm, LogTerm,
    PrecisionBudget, SignOptions,
};
use num_bigint::BigInt;
use num_rational::BigRational;

fn term(b: i64, slope: i64, offset: i64) -> LogTerm {
    LogTerm::new(BigInt::from(b), BigRational::from_integer(slope.into()), BigRational::from_integer(offset.into()))
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(k.into())
}

fn main() -> circuit_roots::Result<()> {
    // log|u| + log|2 - u| touches zero at u = 1; the second form crosses once
    let forms = [
        ("log|u| + log|2 - u|", LogLinForm::new(vec![term(1, 1, 0), term(1, -1, 2)])?, Endpoint::Finite(int(2))),
        ("3 log|u| - 2 log|u + 1|", LogLinForm::new(vec![term(3, 1, 0), term(-2, 1, 1)])?, Endpoint::PosInf),
    ];
    let opts = SignOptions::default();
    for (name, l, hi) in forms {
        let budget = PrecisionBudget::new(&l);
        let mut crit = CriticalSet::new(&l)?;
        println!("{name}: critical polynomial {}, ceiling {} bits", crit.g, budget.ceiling_bits());
        for j in crit.intervals.clone() {
            let s = sign_at_critical_point(&l, &j, &budget, &opts)?;
            println!("  critical point in [{}, {}]: sign {s}, exact test {:?}", j.lo, j.hi, exact_zero_test(&l, &j)?);
        }
        let t = count_roots_in_interval(&l, &mut crit, &Endpoint::Finite(int(0)), &hi, &budget, &opts)?;
        println!("  on (0, {hi}): signs {:?}, {} roots", t.signs, t.total());
    }
    Ok(())
}
