//! Moment sequences `rho(n)`, the spectrum map `e(n) = rho(n) / rho(n-1)`
//! and the power-law asymptotics `1 - e(n) ~ c n^(-theta)`.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::ln_bessel_k;

/// The moment families with known weight functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `rho(n) = e^a (n+1)^(-nu) exp(-a (n+1)^(l/k))`.
    GeneralPower { a: f64, nu: f64, k: usize, l: usize },
    /// `rho(n) = K_nu(sqrt(n+1)) / (K_nu(1) sqrt(n+1))`.
    BesselK { nu: f64 },
    /// `rho(n) = e^(-1) e^(1/(n+1)) (n+1)^(-4/3)`.
    BesselIExp,
    /// `rho(n) = (n+2) / (2(n+1))`, spectrum `1 - (n+1)^(-2)`.
    CoulombExact,
    /// `rho(n) = e^(-1) e^(1/(n+1))`.
    CoulombAlt,
}

#[derive(Serialize, Deserialize)]
struct FamilyRecord {
    #[serde(flatten)]
    kind: FamilyKind,
    #[serde(default)]
    positivity_waiver: bool,
}

/// A validated moment family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRecord", into = "FamilyRecord")]
pub struct MomentFamily {
    kind: FamilyKind,
    positivity_waiver: bool,
    /// `ln K_nu(1)` for the Bessel-K family, zero otherwise.
    ln_k_at_one: f64,
}

impl TryFrom<FamilyRecord> for MomentFamily {
    type Error = Error;

    fn try_from(r: FamilyRecord) -> Result<Self> {
        match r.kind {
            FamilyKind::GeneralPower { a, nu, k, l } if r.positivity_waiver => Self::general_with_waiver(a, nu, k, l),
            FamilyKind::GeneralPower { a, nu, k, l } => Self::general(a, nu, k, l),
            FamilyKind::BesselK { nu } => Self::bessel_k(nu),
            FamilyKind::BesselIExp => Ok(Self::bessel_i_exp()),
            FamilyKind::CoulombExact => Ok(Self::coulomb_exact()),
            FamilyKind::CoulombAlt => Ok(Self::coulomb_alt()),
        }
    }
}

impl From<MomentFamily> for FamilyRecord {
    fn from(f: MomentFamily) -> Self {
        FamilyRecord { kind: f.kind, positivity_waiver: f.positivity_waiver }
    }
}

impl MomentFamily {
    /// General `(a, nu, k, l)` family; `nu < 0` is rejected.
    pub fn general(a: f64, nu: f64, k: usize, l: usize) -> Result<Self> {
        if nu < 0.0 {
            return Err(Error::PositivityWaiver(nu));
        }
        Self::general_unchecked_sign(a, nu, k, l, false)
    }

    /// General family admitting `nu < 0`, whose weight is not positive.
    pub fn general_with_waiver(a: f64, nu: f64, k: usize, l: usize) -> Result<Self> {
        Self::general_unchecked_sign(a, nu, k, l, true)
    }

    fn general_unchecked_sign(a: f64, nu: f64, k: usize, l: usize, waiver: bool) -> Result<Self> {
        if l == 0 || k <= l {
            return domain(format!("general family needs k > l >= 1, got k = {k}, l = {l}"));
        }
        if !(a > 0.0) || !a.is_finite() {
            return domain(format!("general family needs a > 0, got {a}"));
        }
        if !nu.is_finite() {
            return domain(format!("general family needs finite nu, got {nu}"));
        }
        Ok(MomentFamily { kind: FamilyKind::GeneralPower { a, nu, k, l }, positivity_waiver: waiver, ln_k_at_one: 0.0 })
    }

    pub fn bessel_k(nu: f64) -> Result<Self> {
        if !nu.is_finite() {
            return domain(format!("Bessel-K family needs finite nu, got {nu}"));
        }
        let ln_k_at_one = ln_bessel_k(nu, 1.0)?;
        Ok(MomentFamily { kind: FamilyKind::BesselK { nu }, positivity_waiver: false, ln_k_at_one })
    }

    pub fn bessel_i_exp() -> Self {
        Self::plain(FamilyKind::BesselIExp)
    }

    pub fn coulomb_exact() -> Self {
        Self::plain(FamilyKind::CoulombExact)
    }

    pub fn coulomb_alt() -> Self {
        Self::plain(FamilyKind::CoulombAlt)
    }

    fn plain(kind: FamilyKind) -> Self {
        MomentFamily { kind, positivity_waiver: false, ln_k_at_one: 0.0 }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn positivity_waiver(&self) -> bool {
        self.positivity_waiver
    }

    pub(crate) fn ln_k_at_one(&self) -> f64 {
        self.ln_k_at_one
    }

    /// `ln rho(n)`.
    pub fn ln_rho(&self, n: u64) -> f64 {
        let m = n as f64 + 1.0;
        match self.kind {
            FamilyKind::GeneralPower { a, nu, k, l } => a - nu * m.ln() - a * m.powf(l as f64 / k as f64),
            FamilyKind::BesselK { nu } => {
                let x = m.sqrt();
                // x >= 1 so the only failure mode (x <= 0) cannot occur.
                ln_bessel_k(nu, x).expect("positive argument") - self.ln_k_at_one - 0.5 * m.ln()
            }
            FamilyKind::BesselIExp => 1.0 / m - 1.0 - 4.0 / 3.0 * m.ln(),
            FamilyKind::CoulombExact => ((m + 1.0) / (2.0 * m)).ln(),
            FamilyKind::CoulombAlt => 1.0 / m - 1.0,
        }
    }

    /// `ln e(n)` for `n >= 1`, computed without differencing large logs
    /// where a closed form is available. `-inf` at `n = 0`.
    pub fn ln_spectrum(&self, n: u64) -> f64 {
        if n == 0 {
            return f64::NEG_INFINITY;
        }
        let nf = n as f64;
        let step = (1.0 / nf).ln_1p();
        match self.kind {
            FamilyKind::GeneralPower { a, nu, k, l } => {
                let r = l as f64 / k as f64;
                // (n+1)^r - n^r = n^r (exp(r ln(1 + 1/n)) - 1)
                -nu * step - a * nf.powf(r) * (r * step).exp_m1()
            }
            FamilyKind::BesselIExp => -1.0 / (nf * (nf + 1.0)) - 4.0 / 3.0 * step,
            FamilyKind::CoulombExact => (-1.0 / ((nf + 1.0) * (nf + 1.0))).ln_1p(),
            FamilyKind::CoulombAlt => -1.0 / (nf * (nf + 1.0)),
            FamilyKind::BesselK { .. } => self.ln_rho(n) - self.ln_rho(n - 1),
        }
    }

    /// `1 - e(n)`, accurate when `e(n)` is close to 1.
    pub fn one_minus_spectrum(&self, n: u64) -> f64 {
        -self.ln_spectrum(n).exp_m1()
    }

    /// Leading asymptotics `(theta, c)` implied by the closed form of `rho`.
    pub fn predicted_asymptotics(&self) -> AsymptoticDescriptor {
        match self.kind {
            FamilyKind::GeneralPower { a, k, l, .. } => {
                AsymptoticDescriptor::new((k - l) as f64 / k as f64, a * l as f64 / k as f64)
            }
            FamilyKind::BesselK { .. } => AsymptoticDescriptor::new(0.5, 0.5),
            FamilyKind::BesselIExp => AsymptoticDescriptor::new(1.0, 4.0 / 3.0),
            FamilyKind::CoulombExact | FamilyKind::CoulombAlt => AsymptoticDescriptor::new(2.0, 1.0),
        }
    }
}

impl fmt::Display for MomentFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::GeneralPower { a, nu, k, l } => write!(f, "general(a={a}, nu={nu}, k={k}, l={l})"),
            FamilyKind::BesselK { nu } => write!(f, "bessel_k(nu={nu})"),
            FamilyKind::BesselIExp => f.write_str("bessel_i_exp"),
            FamilyKind::CoulombExact => f.write_str("coulomb_exact"),
            FamilyKind::CoulombAlt => f.write_str("coulomb_alt"),
        }
    }
}

/// `rho(n)`; `rho(0) = 1` for every family.
pub fn rho(family: &MomentFamily, n: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    family.ln_rho(n).exp()
}

/// `e(n) = rho(n) / rho(n-1)`, with `e(0) = 0`.
pub fn spectrum(family: &MomentFamily, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    match family.kind {
        FamilyKind::CoulombExact => {
            let m = n as f64 + 1.0;
            1.0 - 1.0 / (m * m)
        }
        _ => family.ln_spectrum(n).exp(),
    }
}

/// Power-law description `1 - e(n) ~ c n^(-theta)` and the potential
/// exponent `sigma = 2 theta / (2 + theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticDescriptor {
    pub theta: f64,
    pub c: f64,
    pub sigma: f64,
}

impl AsymptoticDescriptor {
    pub fn new(theta: f64, c: f64) -> Self {
        AsymptoticDescriptor { theta, c, sigma: 2.0 * theta / (2.0 + theta) }
    }
}

/// Number of log-spaced sample points used by [`fit_asymptotics`].
const FIT_SAMPLES: usize = 256;

/// Fits `1 - e(n) ~ c n^(-theta)` over `[n_min, n_max]`.
///
/// The fit is done on `-ln e(n)`, which shares the leading term with
/// `1 - e(n)` but drops its `(1 - e)^2 / 2` correction. For slowly decaying
/// spectra (`theta < 0.85`) the next term of the general family is a pure
/// `1/n` (from the `(n+1)^(-nu)` prefactor), so the model is widened to
/// `c n^(-theta) + d / n` and fitted by variable projection: linear least
/// squares in `(c, d)` nested inside a one-dimensional search over `theta`.
pub fn fit_asymptotics(family: &MomentFamily, n_min: u64, n_max: u64) -> Result<AsymptoticDescriptor> {
    if n_min < 100 || n_max < 4 * n_min {
        return domain(format!("fit needs n_max >= 4 n_min >= 400, got n_min = {n_min}, n_max = {n_max}"));
    }
    let (lo, hi) = ((n_min as f64).ln(), (n_max as f64).ln());
    let mut ns: Vec<u64> =
        (0..FIT_SAMPLES).map(|i| (lo + (hi - lo) * i as f64 / (FIT_SAMPLES - 1) as f64).exp().round() as u64).collect();
    ns.dedup();
    let mut xs = Vec::with_capacity(ns.len());
    let mut ys = Vec::with_capacity(ns.len());
    for &n in &ns {
        let y = -family.ln_spectrum(n);
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::Fit(format!("1 - e(n) <= 0 at n = {n}: spectrum is not increasing toward 1")));
        }
        xs.push(n as f64);
        ys.push(y);
    }

    let (theta0, c0) = log_log_fit(&xs, &ys);
    if theta0 >= 0.85 {
        return Ok(AsymptoticDescriptor::new(theta0, c0));
    }
    let objective = |theta: f64| projected_fit(&xs, &ys, theta).2;
    let theta = golden_section(objective, (theta0 - 0.25).max(1e-3), theta0 + 0.25, 1e-10);
    let (c, _, _) = projected_fit(&xs, &ys, theta);
    if !(c > 0.0) {
        return Err(Error::Fit(format!("non-positive amplitude {c} at theta = {theta}")));
    }
    Ok(AsymptoticDescriptor::new(theta, c))
}

/// Ordinary least squares of `ln y` against `ln x`: returns `(theta, c)`.
fn log_log_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (-slope, intercept.exp())
}

/// Relative least squares of `y = c x^(-theta) + d / x` at fixed `theta`:
/// returns `(c, d, residual)`.
fn projected_fit(xs: &[f64], ys: &[f64], theta: f64) -> (f64, f64, f64) {
    let (mut s11, mut s12, mut s22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let f1 = x.powf(-theta) / y;
        let f2 = 1.0 / (x * y);
        s11 += f1 * f1;
        s12 += f1 * f2;
        s22 += f2 * f2;
        b1 += f1;
        b2 += f2;
    }
    let det = s11 * s22 - s12 * s12;
    let c = (b1 * s22 - b2 * s12) / det;
    let d = (s11 * b2 - s12 * b1) / det;
    let residual = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = 1.0 - (c * x.powf(-theta) + d / x) / y;
            r * r
        })
        .sum();
    (c, d, residual)
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// `sigma = 2 (k - l) / (3k - l)`.
pub fn sigma_from_kl(k: usize, l: usize) -> Result<f64> {
    let s = sigma_from_kl_exact(k, l)?;
    Ok(*s.numer() as f64 / *s.denom() as f64)
}

/// [`sigma_from_kl`] as an exact rational.
pub fn sigma_from_kl_exact(k: usize, l: usize) -> Result<Ratio<i64>> {
    if l == 0 || k <= l {
        return domain(format!("sigma_from_kl needs k > l >= 1, got k = {k}, l = {l}"));
    }
    let (k, l) = (k as i64, l as i64);
    Ok(Ratio::new(2 * (k - l), 3 * k - l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn illustrative() -> MomentFamily {
        MomentFamily::general(1.0, 0.0, 2, 1).unwrap()
    }

    fn all_families() -> Vec<MomentFamily> {
        vec![
            illustrative(),
            MomentFamily::general(1.0, 0.5, 3, 1).unwrap(),
            MomentFamily::general(2.0, 0.25, 3, 2).unwrap(),
            MomentFamily::bessel_k(4.0 / 3.0).unwrap(),
            MomentFamily::bessel_i_exp(),
            MomentFamily::coulomb_exact(),
            MomentFamily::coulomb_alt(),
        ]
    }

    #[test]
    fn rho_examples() {
        let f = illustrative();
        assert_eq!(rho(&f, 0), 1.0);
        assert_relative_eq!(rho(&f, 3), (-1.0f64).exp(), max_relative = 1e-14);
        assert_eq!(rho(&MomentFamily::coulomb_exact(), 0), 1.0);
        assert_eq!(rho(&MomentFamily::bessel_k(4.0 / 3.0).unwrap(), 0), 1.0);
        assert_relative_eq!(rho(&MomentFamily::bessel_i_exp(), 3), 0.074_393_070_383_085_15, max_relative = 1e-13);
        assert_relative_eq!(rho(&MomentFamily::coulomb_exact(), 4), 0.6, max_relative = 1e-15);
    }

    #[test]
    fn spectrum_examples() {
        let f = illustrative();
        for fam in all_families() {
            assert_eq!(spectrum(&fam, 0), 0.0);
        }
        assert_relative_eq!(spectrum(&f, 1), (1.0 - 2f64.sqrt()).exp(), max_relative = 1e-14);
        assert_relative_eq!(spectrum(&f, 1), 0.660_859_801_406_827_9, max_relative = 1e-14);
        assert_eq!(spectrum(&MomentFamily::coulomb_exact(), 2), 8.0 / 9.0);
        for n in 1..50 {
            let closed = ((n as f64).sqrt() - (n as f64 + 1.0).sqrt()).exp();
            assert_relative_eq!(spectrum(&f, n), closed, max_relative = 1e-13);
        }
    }

    #[test]
    fn spectrum_matches_ratio_of_moments() {
        for fam in all_families() {
            for n in [1u64, 2, 7, 40, 300] {
                let ratio = rho(&fam, n) / rho(&fam, n - 1);
                assert_relative_eq!(spectrum(&fam, n), ratio, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn spectra_increase_toward_one() {
        for fam in all_families() {
            let mut prev = spectrum(&fam, 0);
            for n in 1..=10_000u64 {
                let e = spectrum(&fam, n);
                assert!(e > prev && e < 1.0, "{fam} at n = {n}: {prev} -> {e}");
                prev = e;
            }
        }
    }

    #[test]
    fn moments_decrease() {
        for fam in all_families() {
            for n in 1..200u64 {
                assert!(rho(&fam, n) < rho(&fam, n - 1));
            }
        }
        for n in 0..200 {
            assert!(rho(&MomentFamily::coulomb_exact(), n) > 0.5);
            assert!(rho(&MomentFamily::coulomb_alt(), n) > 1.0 / E);
        }
    }

    #[test]
    fn validation() {
        assert!(matches!(MomentFamily::general(1.0, -0.5, 3, 1), Err(Error::PositivityWaiver(_))));
        assert!(MomentFamily::general_with_waiver(1.0, -0.5, 3, 1).unwrap().positivity_waiver());
        assert!(MomentFamily::general(1.0, 0.0, 2, 2).is_err());
        assert!(MomentFamily::general(1.0, 0.0, 2, 0).is_err());
        assert!(MomentFamily::general(0.0, 0.0, 2, 1).is_err());
        assert!(MomentFamily::bessel_k(f64::NAN).is_err());
    }

    #[test]
    fn serde_round_trip_revalidates() {
        for fam in all_families() {
            let s = serde_json::to_string(&fam).unwrap();
            let back: MomentFamily = serde_json::from_str(&s).unwrap();
            assert_eq!(back, fam);
        }
        let bad = r#"{"kind":"general_power","a":1.0,"nu":-0.5,"k":3,"l":1}"#;
        assert!(serde_json::from_str::<MomentFamily>(bad).is_err());
        let waived = r#"{"kind":"general_power","a":1.0,"nu":-0.5,"k":3,"l":1,"positivity_waiver":true}"#;
        assert!(serde_json::from_str::<MomentFamily>(waived).is_ok());
    }

    #[test]
    fn fits_recover_leading_asymptotics() {
        let cases = [
            (illustrative(), 0.5, 0.5, 0.4),
            (MomentFamily::general(1.0, 0.0, 3, 1).unwrap(), 2.0 / 3.0, 1.0 / 3.0, 0.5),
            (MomentFamily::general(1.0, 0.0, 3, 2).unwrap(), 1.0 / 3.0, 2.0 / 3.0, 2.0 / 7.0),
            (MomentFamily::bessel_i_exp(), 1.0, 4.0 / 3.0, 2.0 / 3.0),
            (MomentFamily::coulomb_alt(), 2.0, 1.0, 1.0),
            (MomentFamily::coulomb_exact(), 2.0, 1.0, 1.0),
            (MomentFamily::bessel_k(4.0 / 3.0).unwrap(), 0.5, 0.5, 0.4),
        ];
        for (fam, theta, c, sigma) in cases {
            let d = fit_asymptotics(&fam, 500, 20_000).unwrap();
            assert_relative_eq!(d.theta, theta, max_relative = 0.01);
            assert_relative_eq!(d.c, c, max_relative = 0.02);
            assert_relative_eq!(d.sigma, sigma, max_relative = 0.01);
        }
    }

    #[test]
    fn fit_is_blind_to_nu() {
        let a = fit_asymptotics(&MomentFamily::general(1.0, 0.0, 3, 1).unwrap(), 500, 20_000).unwrap();
        let b = fit_asymptotics(&MomentFamily::general(1.0, 0.5, 3, 1).unwrap(), 500, 20_000).unwrap();
        assert_relative_eq!(a.theta, b.theta, max_relative = 0.01);
        assert_relative_eq!(a.c, b.c, max_relative = 0.02);
    }

    #[test]
    fn fit_range_is_checked() {
        assert!(fit_asymptotics(&illustrative(), 50, 1000).is_err());
        assert!(fit_asymptotics(&illustrative(), 500, 1000).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_from_kl(2, 1).unwrap(), 0.4);
        assert_eq!(sigma_from_kl(3, 1).unwrap(), 0.5);
        assert_eq!(sigma_from_kl_exact(100, 99).unwrap(), Ratio::new(2, 201));
        assert!(sigma_from_kl(2, 2).is_err());
        assert!(sigma_from_kl(3, 0).is_err());
    }

    proptest! {
        #[test]
        fn sigma_stays_below_two_thirds(k in 2usize..200, frac in 0.0f64..1.0) {
            let l = 1 + ((k - 1) as f64 * frac) as usize;
            prop_assume!(l < k);
            let s = sigma_from_kl(k, l).unwrap();
            prop_assert!(s > 0.0 && s < 2.0 / 3.0);
        }

        #[test]
        fn descriptor_inverts(theta in 0.01f64..4.0) {
            let d = AsymptoticDescriptor::new(theta, 1.0);
            prop_assert!((2.0 * d.sigma / (2.0 - d.sigma) - theta).abs() < 1e-12 * theta.max(1.0));
        }
    }
}
