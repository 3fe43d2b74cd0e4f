//! Smith and Hermite forms and exact row reduction.
//!
//! `cargo run --example normal_forms`

use circuit_roots::linalg::{hermite, primitive_right_kernel, rank_mod2, rref, smith, IntMatrix};

fn main() -> circuit_roots::Result<()> {
    let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    let st = smith(&m);
    println!("Smith diagonal: {:?}", st.diagonal().iter().map(|d| d.to_string()).collect::<Vec<_>>());
    println!("rank {}, rank mod 2 {}", st.rank(), rank_mod2(&m));

    let (u, h) = hermite(&m);
    println!("Hermite form:\n{h:?}\nwith U:\n{u:?}");

    let (r, _) = rref(&IntMatrix::from_rows(&[[1, 2, 1, 0], [2, 4, 0, 2]]).to_rat());
    println!("RREF:\n{r:?}, pivots {:?}", r.pivot_columns());

    // circuit relation of the lifted points 0, 1, 2 on a line
    let lifted = IntMatrix::from_rows(&[[1, 1, 1], [0, 1, 2]]);
    println!("kernel: {:?}", primitive_right_kernel(&lifted)?.iter().map(|b| b.to_string()).collect::<Vec<_>>());
    Ok(())
}
