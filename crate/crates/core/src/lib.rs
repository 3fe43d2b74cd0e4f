//! Exact root counting for polynomial systems supported on circuits.
//!
//! An `n x n` system whose equations share at most `n + 2` exponent vectors
//! is reduced to a univariate sum of logarithms `L(u)`. Roots of the system
//! in the positive orthant, the real torus, or affine space are then counted
//! from the signs of `L` at its critical points, computed exactly or with
//! certified ball arithmetic.
//!
//! ```
//! use circuit_roots::counter::{count_positive, CountOptions, CountResult, PolySystem};
//!
//! // x^2 - 3x + 1 has two positive roots
//! let sys = PolySystem::from_i64(1, &[&[0], &[1], &[2]], &[&[1, -3, 1]]).unwrap();
//! let n = count_positive(&sys, &CountOptions::default()).unwrap();
//! assert_eq!(n, CountResult::Finite(2));
//! ```

pub mod bigfloat;
pub mod binomial;
pub mod counter;
pub mod error;
pub mod gale;
pub mod gallery;
pub mod io;
pub mod linalg;
pub mod logsign;
pub mod unipoly;

pub use error::{Error, Result};
