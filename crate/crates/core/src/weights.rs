//! Weight functions `W(y)` on `(0, 1)` whose power moments are the
//! sequences of [`crate::moments`].
//!
//! Every density is evaluated in `L = ln(1/y)`. Point masses at `y = 1`
//! are carried separately as `atom_at_one`.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::meijer::{eval_convolution, eval_mellin_barnes, ContourConfig, MeijerGSpec};
use crate::moments::{FamilyKind, MomentFamily};
use crate::quadrature::gauss_kronrod;
use crate::specfun::{ln_bessel_i, ln_bessel_k};

/// How the Meijer G part of a general-family weight is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Bessel closed form where one exists, Mellin-Barnes otherwise.
    ClosedForm,
    MellinBarnes,
    /// Nested convolution of positive kernels; slow, needs `nu >= 0`.
    Convolution,
}

/// A density on `(0, 1)` with an optional point mass at `y = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightFunction {
    family: MomentFamily,
    backend: Backend,
    atom_at_one: f64,
}

impl WeightFunction {
    pub fn new(family: MomentFamily, backend: Backend) -> Result<Self> {
        let atom_at_one = match family.kind() {
            FamilyKind::CoulombExact => 0.5,
            FamilyKind::CoulombAlt => (-1.0f64).exp(),
            _ => 0.0,
        };
        let backend = match family.kind() {
            FamilyKind::GeneralPower { nu, .. } => {
                if backend == Backend::Convolution && nu < 0.0 {
                    return domain(format!("the convolution backend needs nu >= 0, got {nu}"));
                }
                backend
            }
            // Named families have elementary or Bessel densities only.
            _ => Backend::ClosedForm,
        };
        Ok(WeightFunction { family, backend, atom_at_one })
    }

    pub fn family(&self) -> &MomentFamily {
        &self.family
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn atom_at_one(&self) -> f64 {
        self.atom_at_one
    }

    /// Density at `y`, `0 < y < 1`.
    pub fn density(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y < 1.0) {
            return domain(format!("weight density needs 0 < y < 1, got {y}"));
        }
        self.density_l(-y.ln())
    }

    /// Density at `y = exp(-l)`, `l > 0`.
    pub fn density_l(&self, l: f64) -> Result<f64> {
        if !(l > 0.0) || !l.is_finite() {
            return domain(format!("weight density needs L = ln(1/y) > 0, got {l}"));
        }
        match self.family.kind() {
            FamilyKind::GeneralPower { a, nu, k, l: ll } => general_density(a, nu, k, ll, l, self.backend),
            FamilyKind::BesselK { nu } => {
                let x = 1.0 / (8.0 * l);
                let ln =
                    -(2.0f64).ln() - self.family.ln_k_at_one() - 0.5 * (PI * l).ln() - x + ln_bessel_k(0.5 * nu, x)?;
                Ok(ln.exp())
            }
            FamilyKind::BesselIExp => Ok((l.ln() / 6.0 + ln_bessel_i(1.0 / 3.0, 2.0 * l.sqrt())? - 1.0).exp()),
            FamilyKind::CoulombExact => Ok(0.5),
            FamilyKind::CoulombAlt => {
                let x = 2.0 * l.sqrt();
                if x < 1e-4 {
                    // I_1(x)/sqrt(L) = 1 + L/2 + O(L^2)
                    return Ok((1.0 + 0.5 * l) / E);
                }
                Ok((ln_bessel_i(1.0, x)? - 0.5 * l.ln() - 1.0).exp())
            }
        }
    }
}

/// General-family weight at `y` through the requested backend.
pub fn weight_general(a: f64, nu: f64, k: usize, l: usize, y: f64, backend: Backend) -> Result<f64> {
    WeightFunction::new(MomentFamily::general(a, nu, k, l)?, backend)?.density(y)
}

/// Density of a named (or general) family at `y`, with its default backend.
pub fn weight_named(family: &MomentFamily, y: f64) -> Result<f64> {
    WeightFunction::new(*family, Backend::ClosedForm)?.density(y)
}

fn general_density(a: f64, nu: f64, k: usize, l: usize, t: f64, backend: Backend) -> Result<f64> {
    if backend == Backend::ClosedForm {
        if let Some(v) = closed_form(a, nu, k, l, t) {
            return v;
        }
    }
    let (kf, lf) = (k as f64, l as f64);
    let ln_z = kf * a.ln() + lf * lf.ln() - kf * kf.ln() - lf * t.ln();
    // G ~ exp(-(k-l) z^(1/(k-l))) for large z.
    let decay = (kf - lf) * (ln_z / (kf - lf)).exp();
    if decay > 800.0 {
        return Ok(0.0);
    }
    let z = ln_z.exp();
    let g = match backend {
        Backend::Convolution => eval_convolution(k, l, nu, z)?,
        _ => {
            let spec = MeijerGSpec::moment_family(k, l, nu, z)?;
            eval_mellin_barnes(&spec, &ContourConfig::default())?.value
        }
    };
    let ln_prefactor =
        a + 0.5 * kf.ln() + (0.5 - nu) * lf.ln() - 0.5 * (kf - lf) * (2.0 * PI).ln() + (nu - 1.0) * t.ln();
    Ok(ln_prefactor.exp() * g)
}

/// Bessel closed forms for `(k, l, nu)` in {(2,1,0), (3,1,0), (3,1,1/2), (3,2,0)}.
///
/// With `F` the `a = 1` weight divided by `e`, the weight for general `a` is
/// `e^a a^((nu-1)/r) F(t a^(-1/r))` with `r = l/k`.
fn closed_form(a: f64, nu: f64, k: usize, l: usize, t: f64) -> Option<Result<f64>> {
    let r = l as f64 / k as f64;
    let s = t * a.powf(-1.0 / r);
    let ln_f = match (k, l) {
        (2, 1) if nu == 0.0 => Ok(-(2.0 * PI.sqrt()).ln() - 1.5 * s.ln() - 0.25 / s),
        (3, 1) if nu == 0.0 => {
            let x = 2.0 * 3f64.sqrt() / (9.0 * s.sqrt());
            ln_bessel_k(1.0 / 3.0, x).map(|lk| -(3.0 * PI).ln() - 1.5 * s.ln() + lk)
        }
        (3, 1) if nu == 0.5 => {
            let x = 3f64.sqrt() / (9.0 * s.sqrt());
            ln_bessel_k(1.0 / 3.0, x)
                .and_then(|k1| Ok(k1 + ln_bessel_k(2.0 / 3.0, x)?))
                .map(|kk| -(3.0 * PI.powf(1.5)).ln() - s.ln() + kk)
        }
        (3, 2) if nu == 0.0 => {
            let x = 2.0 / (27.0 * s * s);
            ln_bessel_k(1.0 / 3.0, x).and_then(|k1| {
                let k2 = ln_bessel_k(2.0 / 3.0, x)?;
                let ln_sum = k1.max(k2) + (-(k1 - k2).abs()).exp().ln_1p();
                Ok((2.0 * 3f64.sqrt() / (27.0 * PI)).ln() - 3.0 * s.ln() - x + ln_sum)
            })
        }
        _ => return None,
    };
    Some(ln_f.map(|v| (a + (nu - 1.0) / r * a.ln() + v).exp()))
}

/// Outcome of [`positivity_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub min_value: f64,
    pub argmin_y: f64,
    pub argmin_l: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Smallest and largest `L = ln(1/y)` sampled by [`positivity_scan`].
const SCAN_L_RANGE: (f64, f64) = (1e-8, 1e3);

/// Samples the density on a grid log-spaced in `L`, dense toward both
/// `y -> 1` (small `L`) and `y -> 0` (large `L`). Passes when every sample
/// is at least `-1e-12`.
pub fn positivity_scan(wf: &WeightFunction, grid_size: usize) -> Result<PositivityReport> {
    if grid_size < 1000 {
        return domain(format!("positivity scan needs at least 1000 points, got {grid_size}"));
    }
    let (lo, hi) = (SCAN_L_RANGE.0.ln(), SCAN_L_RANGE.1.ln());
    let mut report =
        PositivityReport { min_value: f64::INFINITY, argmin_y: 0.0, argmin_l: 0.0, samples: grid_size, pass: true };
    for i in 0..grid_size {
        let l = (lo + (hi - lo) * i as f64 / (grid_size - 1) as f64).exp();
        let v = wf.density_l(l)?;
        if v < report.min_value {
            report.min_value = v;
            report.argmin_l = l;
            report.argmin_y = (-l).exp();
        }
    }
    report.pass = report.min_value >= -1e-12;
    Ok(report)
}

/// Two weight curves sampled on a uniform `y` grid, with their atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureData {
    pub figure_id: u8,
    pub labels: [String; 2],
    pub y: Vec<f64>,
    pub curve_i: Vec<f64>,
    pub curve_ii: Vec<f64>,
    /// Point masses at `y = 1` for curves I and II.
    pub atoms: [f64; 2],
}

/// Weight functions plotted in figure `figure_id`.
pub fn figure_weights(figure_id: u8) -> Result<[WeightFunction; 2]> {
    let pair = match figure_id {
        1 => [MomentFamily::general(1.0, 0.0, 3, 1)?, MomentFamily::general(1.0, 0.5, 3, 1)?],
        2 => [MomentFamily::general(1.0, 0.0, 3, 2)?, MomentFamily::general(1.0, 0.25, 3, 2)?],
        3 => [MomentFamily::general(1.0, 0.0, 2, 1)?, MomentFamily::bessel_k(4.0 / 3.0)?],
        4 => [MomentFamily::coulomb_exact(), MomentFamily::coulomb_alt()],
        other => return Err(Error::Domain(format!("unknown figure id {other}; expected 1 to 4"))),
    };
    Ok([WeightFunction::new(pair[0], Backend::ClosedForm)?, WeightFunction::new(pair[1], Backend::ClosedForm)?])
}

/// Tabulates both curves of a figure at `y_i = i / (grid_size + 1)`.
pub fn figure_data(figure_id: u8, grid_size: usize) -> Result<FigureData> {
    let weights = figure_weights(figure_id)?;
    if grid_size < 100 {
        return domain(format!("figure grid needs at least 100 points, got {grid_size}"));
    }
    let y: Vec<f64> = (1..=grid_size).map(|i| i as f64 / (grid_size + 1) as f64).collect();
    let sample = |wf: &WeightFunction| y.iter().map(|&v| wf.density(v)).collect::<Result<Vec<f64>>>();
    Ok(FigureData {
        figure_id,
        labels: [weights[0].family().to_string(), weights[1].family().to_string()],
        curve_i: sample(&weights[0])?,
        curve_ii: sample(&weights[1])?,
        atoms: [weights[0].atom_at_one(), weights[1].atom_at_one()],
        y,
    })
}

/// `∫_0^1 W(y) dy + atom`, integrated in `L` with `dy = e^(-L) dL`.
pub fn total_mass(wf: &WeightFunction, rel_tol: f64) -> Result<f64> {
    let mut failure = None;
    let mut f = |u: f64| {
        // L = u / (1 - u) maps (0, 1) onto (0, ∞).
        if u <= 0.0 || u >= 1.0 {
            return 0.0;
        }
        let l = u / (1.0 - u);
        match wf.density_l(l) {
            Ok(d) => d * (-l).exp() / ((1.0 - u) * (1.0 - u)),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let est = gauss_kronrod(&mut f, 0.0, 1.0, rel_tol, 0.0, 2000)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est.value + wf.atom_at_one())
}
