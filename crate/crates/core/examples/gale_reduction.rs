//! From a polynomial system to the univariate form `L(u)`.
//!
//! `cargo run --example gale_reduction`

use circuit_roots::gale::{check_genericity, find_subcircuit, interval_i, reduce_to_gale, reindex_candidates};
use circuit_roots::gallery::{five_dim_circuit, hidden_curve};
use circuit_roots::logsign::critical_poly;

fn main() -> circuit_roots::Result<()> {
    let f = five_dim_circuit(14392);
    let cd = find_subcircuit(f.support())?;
    println!("circuit points {:?}, relation {:?}", cd.sigma, cd.full.iter().map(|b| b.to_string()).collect::<Vec<_>>());

    let r = reindex_candidates(&cd, false).remove(0);
    let gs = reduce_to_gale(&f, &r)?;
    println!("order after reindexing: {:?}", gs.reindexing.order);
    for (i, (s, o)) in gs.gammas.iter().enumerate() {
        println!("  x^a_{} = ({s}) u + ({o})", i + 1);
    }
    println!("interval: {:?}", interval_i(&gs));
    let l = gs.log_form()?;
    println!("L(u) = {l}");
    println!("critical polynomial has degree {:?}", critical_poly(&l).degree());

    // a coefficient matrix with a vanishing minor is refused
    let g = hidden_curve();
    let rep = check_genericity(g.coeffs());
    println!("genericity of the degenerate system: passed = {}, {:?}", rep.passed, rep.failing_minor);
    Ok(())
}
