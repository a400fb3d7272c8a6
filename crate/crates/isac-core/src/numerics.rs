//! Numerical building blocks shared by the performance modules.

mod quadrature;
mod rng;
mod roots;
mod special;

pub use quadrature::{gauss_laguerre, QuadratureRule, DEFAULT_ORDER, MAX_ORDER};
pub use rng::{RandomStream, SampleCursor};
pub use roots::find_root;
pub use special::{lambert_w0, log_bessel_i0, I0_SWITCH};
