//! Special functions used across the crate.
//!
//! All routines are pure; they allocate nothing and hold no state.

mod bessel;
mod gamma;

pub use bessel::{bessel_i, bessel_k, ln_bessel_i, ln_bessel_k};
pub use gamma::{gamma, ln_gamma_real, log_gamma};

pub(crate) use gamma::{ln_gamma_real_unchecked, log_gamma_unchecked};
