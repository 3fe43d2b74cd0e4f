//! Real root isolation for integer polynomials.
//!
//! `cargo run --example root_isolation`

use circuit_roots::unipoly::{isolate_real_roots, refine, root_separation_bound, IntPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn main() -> circuit_roots::Result<()> {
    // (x^2 - 2)(x - 3)(4x + 1)
    let f = IntPoly::from_i64(&[-2, 0, 1]).mul(&IntPoly::from_i64(&[-3, 1])).mul(&IntPoly::from_i64(&[1, 4]));
    println!("f = {f}");
    println!("separation bound: {:e}", root_separation_bound(&f)?.to_f64());
    let eps = BigRational::new(1.into(), BigInt::from(1u64 << 40));
    for j in isolate_real_roots(&f)? {
        let r = refine(&f, &j, &eps)?;
        println!("  root in [{}, {}]  ~ {:.12}", j.lo, j.hi, r.midpoint().to_f64().unwrap_or(f64::NAN));
    }
    Ok(())
}
