//! Numerical machinery for the q-Ruscheweyh operator and the Janowski-type
//! subordination classes `M_{m,l}(q, α, A, B)` and `TM_{m,l}(q, α, A, B)`.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`qcore`] | q-numbers, q-factorials, q-Pochhammer symbols, operator coefficients |
//! | [`series`] | truncated normalized power series, Hadamard product, q-derivative, the operator in both forms |
//! | [`janowski`] | class parameters, the target domain `Ω[A,B]`, the subordination functional and margin |
//! | [`classcheck`] | coefficient weight `μ(k)`, membership tests, extremal functions, extreme-point decomposition |
//! | [`bounds`] | distortion envelopes for `|f|`, `|f′|` and the starlike / convex / close-to-convex radii |
//! | [`verify`] | disk-grid and circle-quadrature checks of every bound, and the audit runner |
//!
//! Everything here is plain `f64` / [`num_complex::Complex64`] arithmetic. Verdicts
//! are floating-point numerics with explicit tolerances, not certified proofs.

pub mod bounds;
pub mod classcheck;
pub mod error;
pub mod janowski;
pub mod qcore;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
