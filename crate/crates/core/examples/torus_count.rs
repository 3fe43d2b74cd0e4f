//! Torus root count of a 4x4 system on six monomials, with the cell tallies.
//!
//! `cargo run --example torus_count`

use circuit_roots::counter::{count_positive, count_torus_detailed, CountOptions};
use circuit_roots::gallery::four_dim_torus;

fn main() -> circuit_roots::Result<()> {
    let f = four_dim_torus();
    let opts = CountOptions::default();
    let d = count_torus_detailed(&f, &opts)?;
    let gs = d.diagnostics.gale.as_ref().expect("reduced");

    println!("reindexed order: {:?}", gs.reindexing.order);
    println!("circuit relation: {:?}", gs.relation.iter().map(|b| b.to_string()).collect::<Vec<_>>());
    println!("L(u) = {}", gs.log_form()?);
    if let Some(g) = &d.diagnostics.critical_poly {
        println!("critical polynomial: {g}");
    }
    for c in &d.diagnostics.cells {
        match &c.count {
            Some(t) => println!("  cell ({}, {}) eligible, signs {:?} -> {} roots", c.lo, c.hi, t.signs, t.total()),
            None => println!("  cell ({}, {}) skipped", c.lo, c.hi),
        }
    }
    println!("torus roots: {}", d.result);
    println!("positive roots: {}", count_positive(&f, &opts)?);
    Ok(())
}
