//! Moment-family G function as a k-fold Mellin convolution.
//!
//! The Mellin symbol of `G(z | Δ(l, nu) ; Δ(k, 0))` factors into
//!
//! - `l` beta-type ratios `Γ(s + j/k) / Γ(s + (nu + j)/l)`, whose inverse
//!   transforms are `x^{j/k} (1 - x)^{mu_j - 1} / Γ(mu_j)` on `(0, 1)` with
//!   `mu_j = (nu + j (k - l)/k) / l`;
//! - `k - l` single gammas `Γ(s + j/k)`, with inverse transforms
//!   `x^{j/k} e^{-x}`.
//!
//! Every kernel is positive for `nu >= 0`, so the convolution is too. The
//! beta kernels are combined first (their support stays inside `(0, 1)`),
//! the gamma kernels last. Two gamma kernels are convolved in closed form,
//! `2 x^{(a+b)/2} K_{a-b}(2 sqrt x)`, which is the integral representation of
//! `K` evaluated by the Bessel routine.

use crate::error::{domain, Error, Result};
use crate::quadrature::{gauss_kronrod, tanh_sinh};
use crate::specfun::{bessel_k, ln_gamma_real_unchecked};

const INNER_TOL: f64 = 1e-11;
const OUTER_TOL: f64 = 1e-9;
const MAX_LEVEL: usize = 11;

#[derive(Debug, Clone, Copy)]
struct BetaKernel {
    power: f64,
    mu: f64,
    ln_gamma_mu: f64,
}

impl BetaKernel {
    fn ln_eval(&self, ln_x: f64, ln_one_minus_x: f64) -> f64 {
        if ln_x == f64::NEG_INFINITY || ln_one_minus_x == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        self.power * ln_x + (self.mu - 1.0) * ln_one_minus_x - self.ln_gamma_mu
    }
}

/// Evaluates `G(z | Δ(l, nu) ; Δ(k, 0))` by nested Mellin convolution.
pub fn eval_convolution(k: usize, l: usize, nu: f64, z: f64) -> Result<f64> {
    if k == 0 || k <= l {
        return domain(format!("convolution needs k > l >= 0, got k = {k}, l = {l}"));
    }
    if !(nu >= 0.0) || !nu.is_finite() {
        return domain(format!("convolution requires nu >= 0 (negative nu destroys positivity), got {nu}"));
    }
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("convolution argument must be positive, got {z}"));
    }
    let kf = k as f64;
    let lf = l as f64;
    let beta: Vec<BetaKernel> = (0..l)
        .filter_map(|j| {
            let jf = j as f64;
            let mu = (nu + jf * (kf - lf) / kf) / lf;
            // mu = 0 is the identity (a point mass at x = 1).
            (mu > 0.0).then(|| BetaKernel { power: jf / kf, mu, ln_gamma_mu: ln_gamma_real_unchecked(mu) })
        })
        .collect();
    let gammas: Vec<f64> = (l..k).map(|j| j as f64 / kf).collect();

    if beta.is_empty() {
        return gamma_chain(&gammas, z);
    }
    // G(z) = ∫_0^1 P(u) W(z/u) du/u
    let mut failure = None;
    let est = tanh_sinh(
        |u, _, one_minus_u| {
            let ln_p = match beta_chain(&beta, u, one_minus_u.ln()) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    return 0.0;
                }
            };
            if ln_p == f64::NEG_INFINITY {
                return 0.0;
            }
            match gamma_chain(&gammas, z / u) {
                Ok(w) if w > 0.0 => (ln_p + w.ln() - u.ln()).exp(),
                Ok(_) => 0.0,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        1.0,
        OUTER_TOL,
        0.0,
        MAX_LEVEL,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est.value.max(0.0))
}

/// Log of the convolution of beta kernels at `u`, given `ln(1 - u)`.
fn beta_chain(kernels: &[BetaKernel], u: f64, ln_one_minus_u: f64) -> Result<f64> {
    match kernels {
        [] => unreachable!("identity chains are handled by the caller"),
        [only] => Ok(only.ln_eval(u.ln(), ln_one_minus_u)),
        [first, rest @ ..] => {
            if u <= 0.0 || ln_one_minus_u == f64::NEG_INFINITY {
                return Ok(f64::NEG_INFINITY);
            }
            // ∫_u^1 f(u/t) P_rest(t) dt/t over t = u + (1 - u) ξ. Distances are
            // carried as logs since 1 - u may be close to the underflow limit.
            // Near t = 1 the integrand scales like (1 - u)^(s - 2); factor that out.
            let s: f64 = kernels.iter().map(|b| b.mu).sum();
            let shift = (s - 1.0) * ln_one_minus_u;
            let width = ln_one_minus_u.exp();
            let mut failure = None;
            let est = tanh_sinh(
                |xi, xl, xr| {
                    let t = u + width * xi;
                    let ln_t = t.ln();
                    let inner = match beta_chain(rest, t, ln_one_minus_u + xr.ln()) {
                        Ok(v) => v,
                        Err(e) => {
                            failure.get_or_insert(e);
                            return 0.0;
                        }
                    };
                    let outer = first.ln_eval(u.ln() - ln_t, ln_one_minus_u + xl.ln() - ln_t);
                    (outer + inner - ln_t + ln_one_minus_u - shift).exp()
                },
                0.0,
                1.0,
                INNER_TOL,
                0.0,
                MAX_LEVEL,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            Ok(est.value.ln() + shift)
        }
    }
}

/// Convolution of `x^{a_j} e^{-x}` kernels at `w`.
fn gamma_chain(powers: &[f64], w: f64) -> Result<f64> {
    match powers {
        [] => unreachable!("at least one gamma kernel is always present"),
        [a] => Ok((a * w.ln() - w).exp()),
        [a, b] => {
            let arg = 2.0 * w.sqrt();
            if arg > 1400.0 {
                return Ok(0.0);
            }
            Ok(2.0 * (0.5 * (a + b) * w.ln()).exp() * bessel_k(a - b, arg)?)
        }
        [a, rest @ ..] => {
            // ∫_0^∞ g_a(w/t) W_rest(t) dt/t with t = e^v.
            let m = rest.len() as f64;
            let v_lo = (w / 80.0).ln();
            let v_hi = m * (80.0 / m).ln();
            if v_lo >= v_hi {
                return Ok(0.0);
            }
            let mut failure = None;
            let est = gauss_kronrod(
                |v| {
                    let t = v.exp();
                    let x = w / t;
                    let outer = (a * x.ln() - x).exp();
                    if outer == 0.0 {
                        return 0.0;
                    }
                    match gamma_chain(rest, t) {
                        Ok(inner) => outer * inner,
                        Err(e) => {
                            failure.get_or_insert(e);
                            0.0
                        }
                    }
                },
                v_lo,
                v_hi,
                INNER_TOL,
                0.0,
                400,
            )
            .map_err(|e| Error::Convergence(format!("gamma-kernel convolution at w = {w}: {e}")))?;
            if let Some(e) = failure {
                return Err(e);
            }
            Ok(est.value)
        }
    }
}
