//! Scalar special functions used by the closed forms: integer-order
//! incomplete gamma (real and complex argument), modified Bessel functions of
//! the second kind at complex argument, the regularized incomplete beta
//! function, and log-gamma/log-beta.
//!
//! All functions are pure. Complex powers, roots and logarithms use the
//! principal branch, arg in (-π, π].

mod bessel;
mod beta;
mod gamma;

pub use bessel::{bessel_k01, bessel_k_int};
pub use beta::regularized_incomplete_beta;
pub use gamma::{
    factorial, ln_beta, ln_gamma, lower_incomplete_gamma_int, regularized_upper_gamma_int,
};


/// Complex number with principal-branch conventions.
pub type ComplexValue = num_complex::Complex64;

/// Iteration cap shared by every series and continued fraction.
pub const MAX_ITERATIONS: usize = 500;

/// Euler–Mascheroni constant.
pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
