//! Affine counts: roots with some coordinates equal to zero.
//!
//! `cargo run --example affine_count`

use circuit_roots::counter::{count_affine, count_torus, CountOptions, PolySystem};
use circuit_roots::gallery::affine_axes;

fn show(name: &str, f: &PolySystem) -> circuit_roots::Result<()> {
    let opts = CountOptions::default();
    println!("{name}: torus {}, affine {}", count_torus(f, &opts)?, count_affine(f, &opts)?);
    Ok(())
}

fn main() -> circuit_roots::Result<()> {
    // whole coordinate axes solve this one
    show("xy, yz, xz, xyz", &affine_axes())?;
    // x^3 - 3x^2 + 2x has the extra root x = 0
    show("x^3 - 3x^2 + 2x", &PolySystem::from_i64(1, &[[1], [2], [3]], &[[2, -3, 1]])?)?;
    // x - 2 and y^2 - 1 share no monomials: (2, 1) and (2, -1)
    show("x - 2, y^2 - 1", &PolySystem::from_i64(2, &[[1, 0], [0, 2], [0, 0]], &[[1, 0, -2], [0, 1, -1]])?)?;
    Ok(())
}
