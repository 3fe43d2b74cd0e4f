//! Certified enclosures of logarithms and of `L` itself.
//!
//! `cargo run --example log_balls`

use circuit_roots::bigfloat::log_ball;
use circuit_roots::logsign::{log_combination_sign, LogLinForm, LogTerm};
use num_bigint::BigInt;
use num_rational::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn main() -> circuit_roots::Result<()> {
    for bits in [16, 64, 256] {
        let b = log_ball(&q(10, 1), bits)?;
        println!("log 10 at {bits:>3} bits: [{:.17}, {:.17}]", b.lower().to_f64(), b.upper().to_f64());
    }
    // 2 log 6 - log 4 - 2 log 3 is exactly zero; 3 log 2 - 2 log 3 is not
    let zero = [(BigInt::from(2), q(6, 1)), (BigInt::from(-1), q(4, 1)), (BigInt::from(-2), q(3, 1))];
    let neg = [(BigInt::from(3), q(2, 1)), (BigInt::from(-2), q(3, 1))];
    println!("sign(2 log 6 - log 4 - 2 log 3) = {}", log_combination_sign(&zero, 4096)?);
    println!("sign(3 log 2 - 2 log 3) = {}", log_combination_sign(&neg, 4096)?);

    let l =
        LogLinForm::new(vec![LogTerm::new(3.into(), q(1, 1), q(0, 1)), LogTerm::new((-2).into(), q(1, 1), q(1, 1))])?;
    let ball = l.eval_ball(&q(1, 3), 100)?;
    println!("L(1/3) for {l}: [{:e}, {:e}]", ball.lower().to_f64(), ball.upper().to_f64());
    Ok(())
}
