//! Bohr-Sommerfeld levels of `V(x) = -|V0| |x|^(-sigma)` (ħ = 1).

use std::f64::consts::PI;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::tanh_sinh;

/// Potential `-|v0| |x|^(-sigma)` for a particle of mass `mass`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub sigma: f64,
    pub v0: f64,
    pub mass: f64,
}

impl PotentialSpec {
    pub fn new(sigma: f64, v0: f64, mass: f64) -> Result<Self> {
        check_sigma(sigma)?;
        if !(v0 > 0.0) || !v0.is_finite() {
            return domain(format!("well depth must be positive, got {v0}"));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return domain(format!("mass must be positive, got {mass}"));
        }
        Ok(PotentialSpec { sigma, v0, mass })
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma < 2.0) {
        return domain(format!("sigma must lie in (0, 2), got {sigma}"));
    }
    Ok(())
}

/// `D(sigma) = ∫_0^1 sqrt(u^(-sigma) - 1) du`.
///
/// With `u = v^q`, `q = 2/(2 - sigma)`, the integrand becomes
/// `q sqrt(1 - v^(q sigma))`, bounded with a square-root zero at `v = 1`.
pub fn d_constant(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let q = 2.0 / (2.0 - sigma);
    let est = tanh_sinh(
        |_, _, one_minus_v| {
            let ln_v = (-one_minus_v).ln_1p();
            q * (-(q * sigma * ln_v).exp_m1()).sqrt()
        },
        0.0,
        1.0,
        1e-13,
        0.0,
        12,
    )?;
    Ok(est.value)
}

/// `2 sigma / (2 - sigma)`, the decay exponent of the levels.
pub fn level_exponent(sigma: f64) -> f64 {
    2.0 * sigma / (2.0 - sigma)
}

/// [`level_exponent`] on exact rationals.
pub fn level_exponent_exact(sigma: Ratio<i64>) -> Ratio<i64> {
    Ratio::from_integer(2) * sigma / (Ratio::from_integer(2) - sigma)
}

/// `E(n) = -((π/2) (n + 1/2) |V0| / (sqrt(2m) D(sigma)))^(-2 sigma / (2 - sigma))`.
pub fn quasiclassical_level(spec: &PotentialSpec, n: u64) -> Result<f64> {
    let d = d_constant(spec.sigma)?;
    let base = 0.5 * PI * (n as f64 + 0.5) * spec.v0 / ((2.0 * spec.mass).sqrt() * d);
    Ok(-base.powf(-level_exponent(spec.sigma)))
}
