//! Modified Bessel functions of real order and positive real argument.

use crate::error::{domain, Result};
use crate::specfun::gamma::ln_gamma_real_unchecked;

/// Above this argument `K_nu` uses its Hankel asymptotic expansion.
const K_ASYMPTOTIC_THRESHOLD: f64 = 30.0;

/// Largest argument accepted by the ascending series for `I_nu`.
const I_SERIES_LIMIT: f64 = 700.0;

/// Modified Bessel function of the second kind `K_nu(x)`, `x > 0`.
///
/// For `x <= 30` the integral `∫_0^∞ exp(-x cosh t) cosh(nu t) dt` is summed
/// with the trapezoidal rule, which converges geometrically for this
/// analytic, doubly-exponentially decaying integrand. The step is chosen
/// from the strip of analyticity so the discretisation error stays below
/// 1e-16 relative.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("bessel_k requires x > 0, got {x}"));
    }
    if !nu.is_finite() {
        return domain(format!("bessel_k requires finite order, got {nu}"));
    }
    let nu = nu.abs();
    if x > K_ASYMPTOTIC_THRESHOLD {
        Ok(k_asymptotic(nu, x))
    } else {
        Ok(k_trapezoid(nu, x))
    }
}

/// `ln K_nu(x)`, finite for arguments where `K_nu` itself underflows.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("bessel_k requires x > 0, got {x}"));
    }
    if !nu.is_finite() {
        return domain(format!("bessel_k requires finite order, got {nu}"));
    }
    let nu = nu.abs();
    if x > K_ASYMPTOTIC_THRESHOLD {
        let (prefactor, sum) = k_asymptotic_parts(nu, x);
        Ok(prefactor.ln() - x + sum.ln())
    } else {
        Ok(k_trapezoid(nu, x).ln())
    }
}

fn k_trapezoid(nu: f64, x: f64) -> f64 {
    // Discretisation error ~ exp(x (1 - cos d) - 2πd/h) with d = 1.3.
    let h = 0.9 * 8.17 / (37.0 + 0.73 * x);
    // Work with exp(-x (cosh t - 1)) to keep the terms O(1) for large x.
    let term = |t: f64| (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
    let mut sum = 0.5 * term(0.0);
    let mut j = 1usize;
    loop {
        let t = j as f64 * h;
        let v = term(t);
        sum += v;
        // The integrand is eventually decreasing; stop once negligible.
        if v < 1e-18 * sum && x * (t.cosh() - 1.0) > nu * t {
            break;
        }
        j += 1;
        if j > 100_000 {
            break;
        }
    }
    sum * h * (-x).exp()
}

fn k_asymptotic(nu: f64, x: f64) -> f64 {
    let (prefactor, sum) = k_asymptotic_parts(nu, x);
    prefactor * (-x).exp() * sum
}

/// `sqrt(π / 2x)` and the Hankel series; `K = prefactor * e^{-x} * sum`.
fn k_asymptotic_parts(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    ((std::f64::consts::PI / (2.0 * x)).sqrt(), sum)
}

/// Modified Bessel function of the first kind `I_nu(x)` from its ascending
/// series, for `x >= 0` and `nu >= 0`.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return domain(format!("bessel_i requires x >= 0, got {x}"));
    }
    if !(nu >= 0.0) || !nu.is_finite() {
        return domain(format!("bessel_i requires nu >= 0, got {nu}"));
    }
    if x > I_SERIES_LIMIT {
        return domain(format!("bessel_i series limited to x <= {I_SERIES_LIMIT}, got {x}"));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let half = 0.5 * x;
    let quarter_sq = half * half;
    let mut term = (nu * half.ln() - ln_gamma_real_unchecked(nu + 1.0)).exp();
    let mut sum = term;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= quarter_sq / (m * (m + nu));
        sum += term;
        // Terms grow until m ~ x/2; only stop on the decreasing side.
        if term < 1e-16 * sum && m * (m + nu) > quarter_sq {
            break;
        }
    }
    Ok(sum)
}

/// `ln I_nu(x)` for `x > 0`, using the large-argument expansion beyond
/// the range of the series.
pub fn ln_bessel_i(nu: f64, x: f64) -> Result<f64> {
    if x <= I_SERIES_LIMIT {
        return Ok(bessel_i(nu, x)?.ln());
    }
    if !nu.is_finite() || nu < 0.0 || !x.is_finite() {
        return domain(format!("bessel_i requires finite nu >= 0 and x, got nu = {nu}, x = {x}"));
    }
    Ok(ln_i_asymptotic(nu, x))
}

fn ln_i_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + sum.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn half_order_closed_form() {
        let expected = (std::f64::consts::PI / 2.0).sqrt() * (-1.0f64).exp();
        assert_relative_eq!(bessel_k(0.5, 1.0).unwrap(), expected, max_relative = 1e-13);
        assert_relative_eq!(bessel_k(0.5, 1.0).unwrap(), 0.461_068_504_4, max_relative = 1e-9);
        for &x in &[0.01, 0.3, 2.0, 29.0, 31.0, 80.0] {
            let exact = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp();
            assert_relative_eq!(bessel_k(0.5, x).unwrap(), exact, max_relative = 1e-12);
        }
    }

    #[test]
    fn log_form_survives_underflow() {
        assert_relative_eq!(
            ln_bessel_k(1.0 / 3.0, 2.0).unwrap(),
            bessel_k(1.0 / 3.0, 2.0).unwrap().ln(),
            max_relative = 1e-14
        );
        assert_relative_eq!(ln_bessel_k(0.5, 40.0).unwrap(), bessel_k(0.5, 40.0).unwrap().ln(), max_relative = 1e-14);
        let x = 2000.0;
        let exact = 0.5 * (std::f64::consts::PI / (2.0 * x)).ln() - x;
        assert_relative_eq!(ln_bessel_k(0.5, x).unwrap(), exact, max_relative = 1e-14);
    }

    #[test]
    fn ln_i_branches_agree() {
        for &nu in &[0.0, 1.0 / 3.0, 1.0] {
            let series = bessel_i(nu, I_SERIES_LIMIT).unwrap().ln();
            assert_relative_eq!(ln_i_asymptotic(nu, I_SERIES_LIMIT), series, max_relative = 1e-14);
        }
    }

    #[test]
    fn order_is_even() {
        assert_eq!(bessel_k(-1.0 / 3.0, 2.0).unwrap(), bessel_k(1.0 / 3.0, 2.0).unwrap());
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_k(0.3, 0.0).is_err());
        assert!(bessel_k(0.3, -1.0).is_err());
        assert!(bessel_i(1.0, -0.1).is_err());
        assert!(bessel_i(-0.5, 1.0).is_err());
    }

    #[test]
    fn i_series_small_values() {
        assert_eq!(bessel_i(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(bessel_i(1.0, 1.0).unwrap(), 0.565_159_104_0, max_relative = 1e-9);
    }

    #[test]
    fn asymptotic_and_trapezoid_branches_agree_at_switch() {
        for &nu in &[0.0, 1.0 / 3.0, 2.0, 4.5] {
            let below = k_trapezoid(nu, K_ASYMPTOTIC_THRESHOLD);
            let above = k_asymptotic(nu, K_ASYMPTOTIC_THRESHOLD);
            assert_relative_eq!(below, above, max_relative = 1e-13);
        }
    }
}
