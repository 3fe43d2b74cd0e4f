//! Small named systems used by the examples and tests.

use crate::counter::PolySystem;

/// Five equations in five unknowns on seven monomials, with the parameter
/// `c = 1/k`. The positive root count jumps as `k` crosses a few thresholds
/// near 20730, 14391 and 13058.
pub fn five_dim_circuit(k: i64) -> PolySystem {
    let points: [[i64; 5]; 7] = [
        [36, 194, 50, 82, 60],
        [76, 240, 0, 41, 1],
        [74, 179, 25, 0, 57],
        [25, 203, 44, 1, 0],
        [20, 167, 64, 12, 68],
        [58, 194, 24, 36, 25],
        [0, 0, 166, 68, 343],
    ];
    let shifts = [37137i64, 24849, 21009, 20769, 20754];
    // 2 on the diagonal, 1 elsewhere, -K_i c, then -9/2 or -21/4; all times 4k
    let rows: Vec<Vec<i64>> = (0..5)
        .map(|i| {
            let mut r: Vec<i64> = (0..5).map(|j| if i == j { 8 * k } else { 4 * k }).collect();
            r.push(-4 * shifts[i]);
            r.push(if i == 0 { -18 * k } else { -21 * k });
            r
        })
        .collect();
    PolySystem::from_i64(5, &points, &rows).expect("valid system")
}

/// Four equations in four unknowns on six monomials with two real roots in
/// the torus, one of them positive.
pub fn four_dim_torus() -> PolySystem {
    let points: [[i64; 4]; 6] =
        [[8, 18, 0, 16], [4, 1, 3, 8], [11, 19, 1, 17], [11, 9, 14, 0], [0, 18, 13, 17], [5, 0, 14, 16]];
    let rows: [[i64; 6]; 4] =
        [[-12, -5, 17, -4, 2, 3], [-9, 14, -8, 3, 12, -1], [5, 4, 11, -16, 18, -19], [-1, 2, 11, -17, -14, -6]];
    PolySystem::from_i64(4, &points, &rows).expect("valid system")
}

/// `y - 1, xy - z - 1, x^2 y - z - 1`: a curve `(1 + t, 1, t)` of positive
/// roots, which a generic count must refuse.
pub fn hidden_curve() -> PolySystem {
    PolySystem::from_i64(
        3,
        &[[0, 1, 0], [1, 1, 0], [2, 1, 0], [0, 0, 1], [0, 0, 0]],
        &[[1, 0, 0, 0, -1], [0, 1, 0, -1, -1], [0, 0, 1, -1, -1]],
    )
    .expect("valid system")
}

/// Three equations on the monomials `xy, yz, xz, xyz`: finitely many torus
/// roots but infinitely many affine ones on the coordinate axes.
pub fn affine_axes() -> PolySystem {
    PolySystem::from_i64(
        3,
        &[[1, 1, 0], [0, 1, 1], [1, 0, 1], [1, 1, 1]],
        &[[1, 1, 1, -3], [1, 2, 4, -7], [1, 3, 9, -13]],
    )
    .expect("valid system")
}
