//! Special functions for the uniform wavefunctions: `Ai(x)` and `J_n(x)`.
//!
//! Target accuracy is `1e-10` relative for `|x| <= 1e3` (`1e-12` absolute
//! near zeros).

mod airy;
mod bessel;

pub use airy::{airy_ai, airy_ai_with_derivative};
pub use bessel::bessel_j;

/// Largest `|x|` accepted by [`airy_ai`].
pub const AIRY_MAX_ARG: f64 = 1e3;
/// Largest order accepted by [`bessel_j`].
pub const BESSEL_MAX_ORDER: u32 = 41;
/// Largest argument accepted by [`bessel_j`].
pub const BESSEL_MAX_ARG: f64 = 1e4;
