//! Gamma function family: principal-branch complex `ln Γ` plus real helpers.
//!
//! The core approximation is the Stirling series on `|z| >= 10`, reached by
//! upward recurrence. The reflection formula covers the left half-plane
//! strip `Re z < 1/2, |Im z| <= 7`; away from the real axis the Stirling
//! series stays valid and is used directly.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// `B_{2m} / (2m (2m - 1))` for m = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_RADIUS: f64 = 10.0;
const REFLECTION_STRIP: f64 = 7.0;

/// Principal branch of `ln Γ(z)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("log_gamma of non-finite argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(Error::Pole(z.re));
    }
    Ok(log_gamma_unchecked(z))
}

pub(crate) fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 && z.im.abs() <= REFLECTION_STRIP {
        // ln Γ(z) = ln π - ln sin(πz) - ln Γ(1 - z), with the 2πi correction
        // that keeps the result on the principal branch.
        let correction = (2.0 * PI).copysign(z.im) * (0.5 * z.re + 0.25).floor();
        let lhs = Complex64::new(LN_PI, correction);
        return lhs - sin_pi(z).ln() - log_gamma_unchecked(Complex64::new(1.0, 0.0) - z);
    }
    if z.norm() >= STIRLING_RADIUS {
        return stirling(z);
    }
    let mut shifted = z;
    let mut log_product = Complex64::new(0.0, 0.0);
    while shifted.norm() < STIRLING_RADIUS {
        log_product += shifted.ln();
        shifted += 1.0;
    }
    stirling(shifted) - log_product
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for coeff in STIRLING.iter().rev() {
        series = series * inv2 + coeff;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series * inv
}

fn sin_pi(z: Complex64) -> Complex64 {
    // Reduce the real part first so that sin(πx) is exact at integers.
    let x = z.re - 2.0 * (0.5 * z.re).floor();
    let (s, c) = (PI * x).sin_cos();
    let y = PI * z.im;
    Complex64::new(s * y.cosh(), c * y.sinh())
}

/// `ln |Γ(x)|` for real `x` that is not a non-positive integer.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma of non-finite argument {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole(x));
    }
    Ok(ln_gamma_real_unchecked(x))
}

pub(crate) fn ln_gamma_real_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        let s = sin_pi(Complex64::new(x, 0.0)).re.abs();
        return LN_PI - s.ln() - ln_gamma_real_unchecked(1.0 - x);
    }
    let mut shifted = x;
    let mut log_product = 0.0;
    while shifted < STIRLING_RADIUS {
        log_product += shifted.ln();
        shifted += 1.0;
    }
    let inv = 1.0 / shifted;
    let inv2 = inv * inv;
    let series = STIRLING.iter().rev().fold(0.0, |acc, c| acc * inv2 + c);
    (shifted - 0.5) * shifted.ln() - shifted + HALF_LN_2PI + series * inv - log_product
}

/// Real gamma function.
pub fn gamma(x: f64) -> Result<f64> {
    let magnitude = ln_gamma_real(x)?.exp();
    // Γ is negative on (-2m-1, -2m).
    if x < 0.0 && (x.floor() as i64) % 2 != 0 {
        Ok(-magnitude)
    } else {
        Ok(magnitude)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_values() {
        let one = log_gamma(c(1.0, 0.0)).unwrap();
        assert!(one.norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(half.re, 0.572_364_942_924_700_1, max_relative = 1e-14);
        assert!(half.im.abs() < 1e-15);
    }

    #[test]
    fn poles_are_rejected() {
        assert_eq!(log_gamma(c(0.0, 0.0)), Err(Error::Pole(0.0)));
        assert_eq!(log_gamma(c(-3.0, 0.0)), Err(Error::Pole(-3.0)));
        assert!(log_gamma(c(-3.0, 1e-3)).is_ok());
        assert!(matches!(log_gamma(c(f64::NAN, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn real_gamma_matches_factorials() {
        let mut fact = 1.0;
        for n in 1..20 {
            assert_relative_eq!(gamma(n as f64).unwrap(), fact, max_relative = 1e-13);
            fact *= n as f64;
        }
        assert_relative_eq!(gamma(-0.5).unwrap(), -2.0 * PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(gamma(-1.5).unwrap(), 4.0 * PI.sqrt() / 3.0, max_relative = 1e-13);
    }
}
