//! Performance theory for integrated sensing and communication (ISAC)
//! transceivers whose embedded learning module can retain at most `C_AI`
//! bits per channel use about the transmitted signal.
//!
//! The crate is `no_std` (with `alloc`). Everything here is a pure function
//! of its inputs; IO, configuration and CSV emission live in `isac-cli`.
//!
//! Module map:
//! - [`numerics`]: Gauss-Laguerre rules, Lambert W, `ln I0`, bracketed
//!   root finding and a counter-based random stream.
//! - [`linalg`]: small dense complex matrices, Jacobi eigensolver, Cholesky.
//! - [`bottleneck`]: capacity budget to equivalent AI noise, scalar and matrix.
//! - [`gaussian`]: closed-form Gaussian rate and distortion.
//! - [`fading`]: Rayleigh / Rician ergodic averages and a Monte-Carlo oracle.
//! - [`mimo`]: log-det rate, Fisher information and CRLB.
//! - [`region`]: power-split frontiers, the time-sharing baseline, membership.
//! - [`allocate`]: learning-constrained power allocation.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is deliberate throughout: it rejects NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod allocate;
pub mod bottleneck;
pub mod error;
pub mod fading;
pub mod gaussian;
pub mod linalg;
pub mod mimo;
pub mod numerics;
pub mod region;

mod fm;

pub use error::{Error, Result};
