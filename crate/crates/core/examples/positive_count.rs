//! Positive root counts of a 5x5 circuit system as its parameter moves.
//!
//! `cargo run --release --example positive_count`

use std::time::Instant;

use circuit_roots::counter::{count_positive, CountOptions};
use circuit_roots::gallery::five_dim_circuit;

fn main() -> circuit_roots::Result<()> {
    let opts = CountOptions::default();
    for k in [20731, 20730, 14392, 14391, 13059, 13058] {
        let start = Instant::now();
        let n = count_positive(&five_dim_circuit(k), &opts)?;
        println!("c = 1/{k:<6} {n:<4} ({:?})", start.elapsed());
    }
    Ok(())
}
