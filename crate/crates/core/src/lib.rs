//! Coherent states for bounded discrete spectra of attractive power-law
//! potentials `V(x) ~ -|x|^(-sigma)`.
//!
//! The crate evaluates moment sequences `rho(n)` whose spectra
//! `e(n) = rho(n) / rho(n-1)` approach 1 with a power-law gap, the
//! positive weight functions solving the associated Hausdorff moment
//! problems on `(0, 1)`, and the coherent-state quantities built on top of
//! them (normalization, action identity, overlaps).
//!
//! Module map:
//!
//! - [`specfun`]: complex log-gamma, modified Bessel `K` and `I`.
//! - [`quadrature`]: Gauss-Legendre, adaptive Gauss-Kronrod and tanh-sinh rules.
//! - [`meijer`]: `G^{k,0}_{l,k}` by Mellin-Barnes contour integration and by
//!   nested Mellin convolution of positive kernels.
//! - [`moments`]: moment families, spectra, asymptotic fits.
//! - [`weights`]: weight functions, positivity scans, figure tables.
//! - [`hausdorff`]: moment reconstruction and verification reports.
//! - [`coherent`]: normalization, action identity and overlaps.
//! - [`quasiclassical`]: Bohr-Sommerfeld constant and levels.
//! - [`report`]: deterministic CSV/JSON emitters.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherent;
mod error;
pub mod hausdorff;
pub mod meijer;
pub mod moments;
pub mod quadrature;
pub mod quasiclassical;
pub mod report;
pub mod specfun;
pub mod weights;

pub use error::{Error, Result};

pub use coherent::{action_identity_residual, normalization, overlap, CsParams, NormalizationSum};
pub use hausdorff::{
    laplace_transform, reconstruct_moment, reconstruct_moment_tol, verify_family, MomentEstimate, VerificationReport,
    VerificationRow,
};
pub use meijer::{
    delta_list, eval_convolution, eval_mellin_barnes, Abscissa, ContourConfig, MeijerGSpec, MellinBarnesValue,
};
pub use moments::{
    fit_asymptotics, rho, sigma_from_kl, sigma_from_kl_exact, spectrum, AsymptoticDescriptor, FamilyKind, MomentFamily,
};
pub use quasiclassical::{d_constant, level_exponent, quasiclassical_level, PotentialSpec};
pub use specfun::{bessel_i, bessel_k, log_gamma};
pub use weights::{
    figure_data, figure_weights, positivity_scan, total_mass, weight_general, weight_named, Backend, FigureData,
    PositivityReport, WeightFunction,
};

pub use num_complex::Complex64;
