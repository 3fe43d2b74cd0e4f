//! Binomial systems `x^{a_j} = c_j` through the Smith form.
//!
//! `cargo run --example binomial`

use circuit_roots::binomial::{count_positive_binomial, count_torus_binomial, BinomialSystem};
use circuit_roots::linalg::IntMatrix;
use num_rational::BigRational;

fn rhs(c: &[i64]) -> Vec<BigRational> {
    c.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

fn main() -> circuit_roots::Result<()> {
    // x^2 y = 3, x y^3 = -5
    let a = IntMatrix::from_rows(&[[2, 1], [1, 3]]);
    let sys = BinomialSystem::new(a, rhs(&[3, -5]))?;
    println!(
        "x^2 y = 3, x y^3 = -5: positive {:?}, torus {}",
        count_positive_binomial(&sys)?,
        count_torus_binomial(&sys)?
    );

    // x^2 = 4, y^2 = 9: four sign patterns
    let sys = BinomialSystem::new(IntMatrix::from_rows(&[[2, 0], [0, 2]]), rhs(&[4, 9]))?;
    println!("x^2 = 4, y^2 = 9: torus {}", count_torus_binomial(&sys)?);

    // x y = 2 twice: a curve of positive roots
    let sys = BinomialSystem::new(IntMatrix::from_rows(&[[1, 1], [1, 1]]), rhs(&[2, 2]))?;
    println!("x y = 2, x y = 2: positive {:?}", count_positive_binomial(&sys)?);
    Ok(())
}
