//! Moment reconstruction `rho(n) = ∫_0^1 y^n W(y) dy + atom` by quadrature.
//!
//! With `y = e^(-t)` the moment is a Laplace transform,
//! `∫_0^∞ e^(-(n+1) t) W(e^(-t)) dt`, whose integrand is smooth and
//! decays exponentially. The range is split at the integrand's maximum
//! `t*`: Gauss-Kronrod on `[0, t*]`, and on the tail the substitution
//! `t = t* - ln(u) / (n+1)` maps `[t*, ∞)` onto `(0, 1]` and absorbs the
//! exponential.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::moments::{rho, MomentFamily};
use crate::quadrature::gauss_kronrod;
use crate::weights::{Backend, WeightFunction};

/// Default relative accuracy of [`reconstruct_moment`].
pub const DEFAULT_REL_TOL: f64 = 1e-9;

const PANEL_BUDGET: usize = 4000;
const SCAN_POINTS: usize = 241;
const SCAN_RANGE: (f64, f64) = (1e-8, 1e3);

/// A reconstructed moment with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub error: f64,
}

/// `∫_0^1 y^n W(y) dy + atom` to [`DEFAULT_REL_TOL`].
pub fn reconstruct_moment(wf: &WeightFunction, n: u64) -> Result<MomentEstimate> {
    reconstruct_moment_tol(wf, n, DEFAULT_REL_TOL)
}

pub fn reconstruct_moment_tol(wf: &WeightFunction, n: u64, rel_tol: f64) -> Result<MomentEstimate> {
    let est = laplace_transform(wf, n as f64 + 1.0, rel_tol)?;
    Ok(MomentEstimate { value: est.value + wf.atom_at_one(), error: est.error })
}

/// `∫_0^∞ e^(-p t) W(e^(-t)) dt` for real `p > 0`, without the atom.
pub fn laplace_transform(wf: &WeightFunction, p: f64, rel_tol: f64) -> Result<MomentEstimate> {
    if !(rel_tol > 0.0) {
        return domain(format!("relative tolerance must be positive, got {rel_tol}"));
    }
    if !(p > 0.0) || !p.is_finite() {
        return domain(format!("Laplace variable must be positive, got {p}"));
    }
    let mut failure: Option<Error> = None;
    let mut density = |t: f64| -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        wf.density_l(t).unwrap_or_else(|e| {
            failure.get_or_insert(e);
            0.0
        })
    };

    // Coarse scan for the maximum of ln W(t) - p t.
    let (lo, hi) = (SCAN_RANGE.0.ln(), SCAN_RANGE.1.ln());
    let mut t_star = SCAN_RANGE.0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..SCAN_POINTS {
        let t = (lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64).exp();
        let w = density(t);
        if w > 0.0 {
            let v = w.ln() - p * t;
            if v > best {
                best = v;
                t_star = t;
            }
        }
    }

    let head = gauss_kronrod(|t| (-p * t).exp() * density(t), 0.0, t_star, rel_tol, 0.0, PANEL_BUDGET);
    let scale = (-p * t_star).exp() / p;
    let tail = gauss_kronrod(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            scale * density(t_star - u.ln() / p)
        },
        0.0,
        1.0,
        rel_tol,
        0.0,
        PANEL_BUDGET,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let (head, tail) = (head?, tail?);
    Ok(MomentEstimate { value: head.value + tail.value, error: head.error + tail.error })
}

/// One line of a [`VerificationReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub n: u64,
    pub rho_exact: f64,
    pub rho_quadrature: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

/// Reconstructed against exact moments for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: MomentFamily,
    pub backend: Backend,
    pub n_max: u64,
    pub tolerance: f64,
    pub max_rel_err: f64,
    pub pass: bool,
    pub rows: Vec<VerificationRow>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One JSON object per row, then a summary object without the rows.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&serde_json::to_string(row).expect("row serializes"));
            out.push('\n');
        }
        let summary = serde_json::json!({
            "family": self.family,
            "backend": self.backend,
            "n_max": self.n_max,
            "tolerance": self.tolerance,
            "max_rel_err": self.max_rel_err,
            "pass": self.pass,
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

/// Smallest tolerance [`verify_family`] accepts.
pub const MIN_VERIFY_TOL: f64 = 1e-13;

/// Compares [`reconstruct_moment`] with the exact moments for `n <= n_max`.
///
/// The quadrature target is a tenth of `tol`, kept within `[1e-13, 1e-9]`.
pub fn verify_family(family: &MomentFamily, n_max: u64, tol: f64, backend: Backend) -> Result<VerificationReport> {
    if !(tol >= MIN_VERIFY_TOL) || !tol.is_finite() {
        return domain(format!("verification tolerance must be in [{MIN_VERIFY_TOL:e}, ∞), got {tol}"));
    }
    let wf = WeightFunction::new(*family, backend)?;
    let quad_tol = (0.1 * tol).clamp(1e-13, DEFAULT_REL_TOL);
    let rows = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let est = reconstruct_moment_tol(&wf, n, quad_tol).map_err(|e| match e {
                Error::Convergence(msg) => Error::Convergence(format!("moment n = {n}: {msg}")),
                other => other,
            })?;
            let exact = rho(family, n);
            let abs_err = (est.value - exact).abs();
            Ok(VerificationRow {
                n,
                rho_exact: exact,
                rho_quadrature: est.value,
                abs_err,
                rel_err: abs_err / exact.abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_rel_err = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    Ok(VerificationReport {
        family: *family,
        backend: wf.backend(),
        n_max,
        tolerance: tol,
        max_rel_err,
        pass: max_rel_err <= tol,
        rows,
    })
}
