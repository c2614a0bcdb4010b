//! Meijer G functions of the shape `G^{k,0}_{l,k}`.
//!
//! `G(z | α_1..α_l ; β_1..β_k)` is the inverse Mellin transform of
//! `Π Γ(β_j + s) / Π Γ(α_j + s)`. Two independent evaluators exist:
//!
//! - [`eval_mellin_barnes`] integrates the inverse Mellin transform along a
//!   vertical contour; it is the production backend.
//! - [`eval_convolution`] builds the moment-family G function as a nested
//!   Mellin convolution of positive kernels; it is slow, positive by
//!   construction, and serves as the reference in tests.

mod convolution;
mod mellin_barnes;

pub use convolution::eval_convolution;
pub use mellin_barnes::eval_mellin_barnes;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// `Δ(k, a) = [a/k, (a+1)/k, ..., (a+k-1)/k]`.
pub fn delta_list(k: usize, a: f64) -> Vec<f64> {
    (0..k).map(|j| (a + j as f64) / k as f64).collect()
}

/// Parameters and argument of `G^{k,0}_{l,k}`.
///
/// The four lists follow the usual `G([[a_1..a_n],[a_{n+1}..a_p]],[[b_1..b_m],[b_{m+1}..b_q]], z)`
/// layout; only the second and third are populated for this shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeijerGSpec {
    pub upper_absent: Vec<f64>,
    pub upper_present: Vec<f64>,
    pub lower_present: Vec<f64>,
    pub lower_absent: Vec<f64>,
    pub argument: f64,
}

impl MeijerGSpec {
    /// `upper` are the denominator parameters `α`, `lower` the numerator `β`.
    pub fn new(upper: Vec<f64>, lower: Vec<f64>, argument: f64) -> Result<Self> {
        Self::from_lists(Vec::new(), upper, lower, Vec::new(), argument)
    }

    pub fn from_lists(
        upper_absent: Vec<f64>,
        upper_present: Vec<f64>,
        lower_present: Vec<f64>,
        lower_absent: Vec<f64>,
        argument: f64,
    ) -> Result<Self> {
        if !upper_absent.is_empty() || !lower_absent.is_empty() {
            return domain("only G^{k,0}_{l,k} is supported: first and fourth parameter lists must be empty");
        }
        if lower_present.is_empty() {
            return domain("at least one numerator parameter is required");
        }
        if lower_present.len() <= upper_present.len() {
            return domain(format!(
                "need k > l for a convergent contour integral, got k = {}, l = {}",
                lower_present.len(),
                upper_present.len()
            ));
        }
        if upper_present.iter().chain(&lower_present).any(|p| !p.is_finite()) {
            return domain("Meijer G parameters must be finite");
        }
        if !(argument > 0.0) || !argument.is_finite() {
            return domain(format!("Meijer G argument must be positive and finite, got {argument}"));
        }
        Ok(MeijerGSpec { upper_absent, upper_present, lower_present, lower_absent, argument })
    }

    /// The moment-family function `G(z | Δ(l, nu) ; Δ(k, 0))`.
    pub fn moment_family(k: usize, l: usize, nu: f64, argument: f64) -> Result<Self> {
        Self::new(delta_list(l, nu), delta_list(k, 0.0), argument)
    }

    pub fn k(&self) -> usize {
        self.lower_present.len()
    }

    pub fn l(&self) -> usize {
        self.upper_present.len()
    }

    pub fn with_argument(&self, argument: f64) -> Result<Self> {
        Self::new(self.upper_present.clone(), self.lower_present.clone(), argument)
    }
}

/// Placement of the vertical integration line `Re s = c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Abscissa {
    /// Fixed line; must lie right of every numerator pole.
    Fixed(f64),
    /// Line through the real saddle point of the integrand.
    Saddle,
}

/// Contour and quadrature controls for [`eval_mellin_barnes`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourConfig {
    pub abscissa: Abscissa,
    /// Truncation of `|Im s|`; `None` picks it from the observed tail decay.
    pub half_height: Option<f64>,
    /// Minimum number of quadrature nodes on the first pass.
    pub nodes: usize,
    /// Relative tolerance on the value.
    pub tol: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig { abscissa: Abscissa::Saddle, half_height: None, nodes: 64, tol: 1e-11 }
    }
}

impl ContourConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 64 {
            return domain(format!("contour needs at least 64 nodes, got {}", self.nodes));
        }
        if let Some(h) = self.half_height {
            if !(h > 0.0) {
                return domain(format!("half_height must be positive, got {h}"));
            }
        }
        if let Abscissa::Fixed(c) = self.abscissa {
            if !c.is_finite() {
                return domain("abscissa must be finite");
            }
        }
        if !(self.tol > 0.0) {
            return domain("contour tolerance must be positive");
        }
        Ok(())
    }
}

/// Result of a contour integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinBarnesValue {
    pub value: f64,
    /// Quadrature plus truncation error estimate (absolute).
    pub error: f64,
    pub abscissa: f64,
    pub half_height: f64,
}
