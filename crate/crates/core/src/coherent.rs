//! Coherent states `|J, γ> = N(J)^(-1/2) Σ J^(n/2) e^(-iγ e(n)) / sqrt(rho(n)) |n>`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::moments::{spectrum, MomentFamily};

/// Largest action accepted; beyond it the series converge too slowly.
pub const J_LIMIT: f64 = 1.0 - 1e-9;

const MAX_TERMS: u64 = 50_000_000;
/// Term ratios observed for the tail certificate.
const RATIO_WINDOW: usize = 10;

/// Action-angle label of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsParams {
    #[serde(rename = "J")]
    pub j: f64,
    pub gamma: f64,
}

impl CsParams {
    pub fn new(j: f64, gamma: f64) -> Result<Self> {
        check_action(j)?;
        if !gamma.is_finite() {
            return domain(format!("gamma must be finite, got {gamma}"));
        }
        Ok(CsParams { j, gamma })
    }
}

/// `N(J)` together with the number of series terms summed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationSum {
    pub value: f64,
    pub terms: u64,
}

fn check_action(j: f64) -> Result<()> {
    if !(j >= 0.0) || !j.is_finite() {
        return domain(format!("action J must satisfy 0 <= J < 1, got {j}"));
    }
    if j >= J_LIMIT {
        return Err(Error::Convergence(format!("J = {j} is within 1e-9 of the convergence radius 1")));
    }
    Ok(())
}

/// Sums `Σ_n x^n / rho(n) * w(n)` for complex weights `|w(n)| <= 1`.
///
/// Stops once the current magnitude is below `tol` times the partial sum
/// of magnitudes and a geometric tail, with ratio the largest of the last
/// few term ratios, is also below it.
fn series(
    family: &MomentFamily,
    x: f64,
    tol: f64,
    mut weight: impl FnMut(u64) -> Complex64,
) -> Result<(Complex64, u64)> {
    if !(tol > 0.0) {
        return domain(format!("summation tolerance must be positive, got {tol}"));
    }
    let mut sum = weight(0);
    if x == 0.0 {
        return Ok((sum, 1));
    }
    let ln_x = x.ln();
    let mut magnitude = 1.0;
    let mut prev = 1.0;
    let mut ratios = [0.0f64; RATIO_WINDOW];
    for n in 1..MAX_TERMS {
        let term = (n as f64 * ln_x - family.ln_rho(n)).exp();
        sum += weight(n) * term;
        magnitude += term;
        ratios[n as usize % RATIO_WINDOW] = term / prev;
        prev = term;
        if n as usize >= RATIO_WINDOW && term < tol * magnitude {
            let r = ratios.iter().copied().fold(0.0, f64::max);
            if r < 1.0 && term * r / (1.0 - r) <= tol * magnitude {
                return Ok((sum, n + 1));
            }
        }
    }
    Err(Error::Convergence(format!("series at J = {x} not converged after {MAX_TERMS} terms")))
}

/// `N(J) = Σ J^n / rho(n)`.
pub fn normalization(family: &MomentFamily, j: f64, tol: f64) -> Result<NormalizationSum> {
    check_action(j)?;
    let (s, terms) = series(family, j, tol, |_| Complex64::new(1.0, 0.0))?;
    Ok(NormalizationSum { value: s.re, terms })
}

/// `<J,γ| H |J,γ> - J`, with `H |n> = e(n) |n>`.
pub fn action_identity_residual(family: &MomentFamily, j: f64, tol: f64) -> Result<f64> {
    let norm = normalization(family, j, tol)?;
    let (s, _) = series(family, j, tol, |n| Complex64::new(spectrum(family, n), 0.0))?;
    Ok(s.re / norm.value - j)
}

/// `<J1,γ1 | J2,γ2>`.
pub fn overlap(family: &MomentFamily, p1: CsParams, p2: CsParams, tol: f64) -> Result<Complex64> {
    check_action(p1.j)?;
    check_action(p2.j)?;
    let n1 = normalization(family, p1.j, tol)?.value;
    let n2 = normalization(family, p2.j, tol)?.value;
    let dgamma = p2.gamma - p1.gamma;
    let (s, _) =
        series(family, (p1.j * p2.j).sqrt(), tol, |n| Complex64::from_polar(1.0, -dgamma * spectrum(family, n)))?;
    Ok(s / (n1 * n2).sqrt())
}
