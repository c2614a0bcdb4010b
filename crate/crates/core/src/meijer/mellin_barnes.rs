use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::{Abscissa, ContourConfig, MeijerGSpec, MellinBarnesValue};
use crate::error::{domain, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::specfun::{ln_gamma_real_unchecked, log_gamma_unchecked};

const PANEL_ORDER: usize = 16;
const MAX_PANELS: usize = 20_000;
const MAX_REFINEMENTS: usize = 4;

fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_ORDER))
}

/// Gamma ratio after cancelling equal numerator/denominator parameters.
struct Integrand {
    numer: Vec<f64>,
    denom: Vec<f64>,
    ln_z: f64,
}

impl Integrand {
    fn new(spec: &MeijerGSpec) -> Self {
        let mut numer = spec.lower_present.clone();
        let mut denom = Vec::with_capacity(spec.upper_present.len());
        for &alpha in &spec.upper_present {
            let hit = numer.iter().position(|&beta| (beta - alpha).abs() <= 1e-14 * alpha.abs().max(1.0));
            match hit {
                Some(i) => {
                    numer.swap_remove(i);
                }
                None => denom.push(alpha),
            }
        }
        Integrand { numer, denom, ln_z: spec.argument.ln() }
    }

    fn excess(&self) -> f64 {
        (self.numer.len() - self.denom.len()) as f64
    }

    fn pole_edge(&self) -> f64 {
        -self.numer.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// `ln |ratio(σ) z^{-σ}|` on the real axis.
    fn real_log(&self, sigma: f64) -> f64 {
        let num: f64 = self.numer.iter().map(|b| ln_gamma_real_unchecked(sigma + b)).sum();
        let den: f64 = self.denom.iter().map(|a| ln_gamma_real_unchecked(sigma + a)).sum();
        num - den - sigma * self.ln_z
    }

    fn log_value(&self, s: Complex64) -> Complex64 {
        let mut acc = -s * self.ln_z;
        for b in &self.numer {
            acc += log_gamma_unchecked(s + b);
        }
        for a in &self.denom {
            acc -= log_gamma_unchecked(s + a);
        }
        acc
    }

    /// Scaled integrand `Re f(c + it) / exp(scale)` and its modulus.
    fn on_line(&self, c: f64, t: f64, scale: f64) -> (f64, f64) {
        let s = Complex64::new(c, t);
        if t == 0.0 && self.denom.iter().any(|a| is_nonpositive_integer(c + a)) {
            return (0.0, 0.0);
        }
        let w = (self.log_value(s) - scale).exp();
        (w.re, w.norm())
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Minimises `ln|integrand|` on the real axis right of every numerator pole.
fn saddle_abscissa(f: &Integrand) -> f64 {
    let edge = f.pole_edge();
    let mut lo = edge;
    if let Some(alpha_min) = f.denom.iter().cloned().reduce(f64::min) {
        // Keep clear of zeros of 1/Γ(σ + α), where ln|.| -> -∞.
        lo = lo.max(0.5 - alpha_min);
    }
    let strict = lo == edge;
    let slope = |x: f64| {
        let h = 1e-5 * x.abs().max(1.0);
        (f.real_log(x + h) - f.real_log(x - h)) / (2.0 * h)
    };
    let mut hi = lo.max(0.0) + 1.0;
    let mut guard = 0;
    while slope(hi) < 0.0 && guard < 60 {
        hi = lo + 2.0 * (hi - lo);
        guard += 1;
    }
    // Golden-section search.
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = f.real_log(x1);
    let mut f2 = f.real_log(x2);
    for _ in 0..80 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f.real_log(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f.real_log(x2);
        }
        if (b - a) < 1e-9 * (b.abs() + (b - lo)) {
            break;
        }
    }
    let c = 0.5 * (a + b);
    if strict && c <= edge {
        edge + 1e-12 * edge.abs().max(1.0)
    } else {
        c
    }
}

/// Inverse Mellin transform of `Π Γ(β + s) / Π Γ(α + s)` along `Re s = c`.
///
/// The integrand is symmetric under `t -> -t` up to conjugation, so the
/// value is `(1/π) ∫_0^T Re f(c + it) dt`. Gauss-Legendre panels are graded
/// from the Gaussian width at the saddle outwards and split in half until
/// two passes agree to `cfg.tol`.
pub fn eval_mellin_barnes(spec: &MeijerGSpec, cfg: &ContourConfig) -> Result<MellinBarnesValue> {
    cfg.validate()?;
    let integrand = Integrand::new(spec);
    let edge = integrand.pole_edge();
    let c = match cfg.abscissa {
        Abscissa::Fixed(c) => {
            if !(c > edge) {
                return domain(format!("contour abscissa {c} must lie right of the pole at {edge}"));
            }
            c
        }
        Abscissa::Saddle => saddle_abscissa(&integrand),
    };
    let scale = integrand.real_log(c);
    if !scale.is_finite() {
        return Err(Error::Convergence(format!("integrand not finite at abscissa {c}")));
    }

    let width = {
        let h = 1e-3 * (c - edge).min(c.abs().max(1.0));
        let d2 = (integrand.real_log(c + h) - 2.0 * scale + integrand.real_log(c - h)) / (h * h);
        if d2 > 0.0 && d2.is_finite() {
            1.0 / d2.sqrt()
        } else {
            1.0
        }
    };
    let decay = integrand.excess() * PI / 2.0;
    let tail_length = 1.0 / decay;
    let ln_z = integrand.ln_z;
    let excess = integrand.excess();
    let max_step = |t: f64| {
        let modulus = (c * c + t * t).sqrt().max(1.0);
        let freq = (excess * modulus.ln() - ln_z).abs() + 1.0;
        (PI / freq).clamp(0.02, 4.0)
    };

    // Lay out panels outward until the modulus has decayed (or the fixed height).
    let rule = panel_rule();
    let mut edges = vec![0.0];
    let mut running = 0.0;
    let mut prev_mod = f64::INFINITY;
    loop {
        let b = *edges.last().unwrap();
        let step = (0.5 * width).max(0.4 * b).min(max_step(b));
        let next = match cfg.half_height {
            Some(t_max) => (b + step).min(t_max),
            None => b + step,
        };
        running += rule.integrate(b, next, |t| integrand.on_line(c, t, scale).0);
        edges.push(next);
        let (_, modulus) = integrand.on_line(c, next, scale);
        if let Some(t_max) = cfg.half_height {
            if next >= t_max {
                break;
            }
        } else if next > 3.0 * width && modulus <= prev_mod && modulus * tail_length <= 1e-3 * cfg.tol * running.abs() {
            break;
        }
        prev_mod = modulus;
        if edges.len() > MAX_PANELS {
            return Err(Error::Convergence(format!(
                "contour integrand still at {modulus:e} after {MAX_PANELS} panels (t = {next})"
            )));
        }
    }
    while edges.len() - 1 < cfg.nodes.div_ceil(PANEL_ORDER) {
        edges = bisect(&edges);
    }
    let half_height = *edges.last().unwrap();
    let (_, end_modulus) = integrand.on_line(c, half_height, scale);
    let tail = end_modulus * tail_length;

    let integrate = |edges: &[f64]| -> (f64, f64) {
        edges.windows(2).fold((0.0, 0.0), |(sum, abs_sum), w| {
            let mut abs_part = 0.0;
            let v = rule.integrate(w[0], w[1], |t| {
                let (re, m) = integrand.on_line(c, t, scale);
                abs_part += m;
                re
            });
            (sum + v, abs_sum + abs_part * (w[1] - w[0]) / PANEL_ORDER as f64)
        })
    };

    let (mut value, _) = integrate(&edges);
    let mut diff = f64::INFINITY;
    let mut abs_mass = 0.0;
    for _ in 0..MAX_REFINEMENTS {
        edges = bisect(&edges);
        let (next, mass) = integrate(&edges);
        diff = (next - value).abs();
        value = next;
        abs_mass = mass;
        if diff <= cfg.tol * value.abs() || diff <= 1e3 * f64::EPSILON * abs_mass {
            break;
        }
    }
    let factor = scale.exp() / PI;
    let result = value * factor;
    let error = (diff + tail) * factor;
    let converged = diff <= cfg.tol * value.abs() || diff <= 1e3 * f64::EPSILON * abs_mass;
    if !converged {
        return Err(Error::Convergence(format!(
            "contour quadrature did not settle: value {result:e}, successive difference {:e}",
            diff * factor
        )));
    }
    if cfg.half_height.is_some() && tail > cfg.tol * value.abs().max(1e3 * f64::EPSILON * abs_mass) {
        return Err(Error::Convergence(format!(
            "truncation at |Im s| = {half_height} leaves tail {:e} against value {result:e}",
            tail * factor
        )));
    }
    Ok(MellinBarnesValue { value: result, error, abscissa: c, half_height })
}

fn bisect(edges: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * edges.len());
    for w in edges.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.push(*edges.last().unwrap());
    out
}
