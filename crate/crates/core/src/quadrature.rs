//! Quadrature rules shared by the numerical backends.
//!
//! - [`GaussLegendre`]: fixed-order rule for smooth panels.
//! - [`gauss_kronrod`]: globally adaptive G10/K21 bisection on a finite interval.
//! - [`tanh_sinh`]: double-exponential rule for integrable endpoint singularities;
//!   the integrand also receives the distances to both endpoints so that
//!   factors like `(1 - x)^(mu - 1)` can be formed without cancellation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[allow(clippy::excessive_precision)]
const XGK21: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG10: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = WGK21[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK21[j];
        let s = f(mid - dx) + f(mid + dx);
        kronrod += WGK21[j] * s;
        if j % 2 == 1 {
            gauss += WG10[j / 2] * s;
        }
    }
    let value = kronrod * half;
    if !value.is_finite() {
        return Err(Error::Convergence(format!("non-finite integrand on [{a}, {b}]")));
    }
    let error = ((kronrod - gauss) * half).abs();
    Ok(Panel { a, b, value, error: error.max(50.0 * f64::EPSILON * value.abs()) })
}

/// Globally adaptive Gauss-Kronrod (10/21) on `[a, b]`.
///
/// Stops once the summed error estimate is below
/// `max(abs_tol, rel_tol * |I|)`.
pub fn gauss_kronrod(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<QuadEstimate> {
    if a == b {
        return Ok(QuadEstimate { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut heap = BinaryHeap::new();
    let first = gk21_panel(&mut f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut evaluations = 21;
    heap.push(first);
    while error > abs_tol.max(rel_tol * value.abs()) {
        if heap.len() >= max_panels {
            return Err(Error::Convergence(format!(
                "Gauss-Kronrod: {max_panels} panels on [{a}, {b}] left error {error:e} (value {value:e})"
            )));
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            heap.push(worst);
            break;
        }
        let left = gk21_panel(&mut f, worst.a, mid)?;
        let right = gk21_panel(&mut f, mid, worst.b)?;
        evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed accumulated rounding from the running updates.
    let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(QuadEstimate { value, error, evaluations })
}

/// Maximum tanh-sinh parameter; endpoint distances reach ~1e-300 here.
const TANH_SINH_TMAX: f64 = 6.56;

/// Tanh-sinh quadrature on `[a, b]`.
///
/// `f(x, x - a, b - x)` receives both endpoint distances computed without
/// cancellation. Halves the step until successive levels agree to `rel_tol`
/// (or to `abs_tol`), starting from step 1/2.
pub fn tanh_sinh(
    mut f: impl FnMut(f64, f64, f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_level: usize,
) -> Result<QuadEstimate> {
    let width = b - a;
    if width == 0.0 {
        return Ok(QuadEstimate { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut evaluations = 0usize;
    let mut node = |tau: f64, evaluations: &mut usize| -> f64 {
        let q = FRAC_PI_2 * tau.sinh();
        let eq = (-2.0 * q.abs()).exp();
        // Distance of x from the nearer endpoint, as a fraction of width.
        let near = width * eq / (1.0 + eq);
        let far = width - near;
        if near <= 0.0 || near < f64::MIN_POSITIVE * 1e10 {
            return 0.0;
        }
        let (dl, dr) = if q < 0.0 { (near, far) } else { (far, near) };
        let x = if q < 0.0 { a + dl } else { b - dr };
        // dx/dtau = width * (π/2) cosh(tau) / (2 cosh²q)
        let jac = width * FRAC_PI_2 * tau.cosh() * eq / ((1.0 + eq) * (1.0 + eq)) * 2.0;
        *evaluations += 1;
        let v = f(x, dl, dr);
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    };

    let mut h = 0.5;
    let mut sum = node(0.0, &mut evaluations);
    let mut k = 1;
    while k as f64 * h <= TANH_SINH_TMAX {
        let t = k as f64 * h;
        sum += node(t, &mut evaluations) + node(-t, &mut evaluations);
        k += 1;
    }
    let mut estimate = sum * h;
    if !estimate.is_finite() {
        return Err(Error::Convergence("tanh-sinh: non-finite integrand".into()));
    }
    for level in 1..=max_level {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= TANH_SINH_TMAX {
            let t = k as f64 * h;
            sum += node(t, &mut evaluations) + node(-t, &mut evaluations);
            k += 2;
        }
        let next = sum * h;
        if !next.is_finite() {
            return Err(Error::Convergence("tanh-sinh: non-finite integrand".into()));
        }
        let diff = (next - estimate).abs();
        estimate = next;
        if level >= 2 && diff <= abs_tol.max(rel_tol * next.abs()) {
            return Ok(QuadEstimate { value: next, error: diff, evaluations });
        }
    }
    Err(Error::Convergence(format!(
        "tanh-sinh did not converge on [{a}, {b}] within {max_level} levels (value {estimate:e})"
    )))
}
