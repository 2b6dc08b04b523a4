//! Numerical integration: a globally adaptive Gauss–Kronrod (10/21) rule,
//! generic over real and complex integrands, and Gauss–Legendre nodes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

mod sphere;

pub use sphere::{box_radial_range, sphere_integral, unit_sphere_area};

/// Values that can be integrated: closed under addition and real scaling.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 400 }
    }
}

impl QuadOptions {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        QuadOptions { abs_tol, rel_tol, ..Default::default() }
    }

    pub fn with_max_subdivisions(mut self, max_subdivisions: usize) -> Self {
        self.max_subdivisions = max_subdivisions;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: QuadValue> QuadResult<T> {
    /// Converts an unconverged result into an error.
    pub fn require(self, tolerance: f64) -> Result<T> {
        if self.converged || self.error <= tolerance {
            Ok(self.value)
        } else {
            Err(Error::Quadrature { estimate: self.error, tolerance })
        }
    }
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525048710,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> Segment<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::default();
    let mut abs_sum = fc.magnitude() * WGK[10];
    let mut samples = [T::default(); 21];
    samples[10] = fc;
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        samples[j] = f1;
        samples[20 - j] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        abs_sum += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).magnitude() * WGK[10];
    for j in 0..10 {
        asc += ((samples[j] - mean).magnitude() + (samples[20 - j] - mean).magnitude()) * WGK[j];
    }
    let h = half.abs();
    let result_abs = abs_sum * h;
    let result_asc = asc * h;
    let mut error = ((kronrod - gauss) * half).magnitude();
    if result_asc != 0.0 && error != 0.0 {
        error = result_asc * (200.0 * error / result_asc).powf(1.5).min(1.0);
    }
    let eps = f64::EPSILON;
    if result_abs > f64::MIN_POSITIVE / (50.0 * eps) {
        error = error.max(50.0 * eps * result_abs);
    }
    Segment { a, b, value: kronrod * half, error }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> QuadResult<T> {
    integrate_with_breaks(f, &[a, b], opts)
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting the adaptive
/// subdivision from the given breakpoints.
pub fn integrate_with_breaks<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    breaks: &[f64],
    opts: &QuadOptions,
) -> QuadResult<T> {
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[1] != w[0] {
            heap.push(gk21(&mut f, w[0], w[1]));
            evaluations += 21;
        }
    }
    let mut subdivisions = heap.len();
    loop {
        let (value, error) = heap
            .iter()
            .fold((T::default(), 0.0), |(v, e), s| (v + s.value, e + s.error));
        let target = opts.abs_tol.max(opts.rel_tol * value.magnitude());
        if error <= target {
            return QuadResult { value, error, evaluations, converged: true };
        }
        if subdivisions >= opts.max_subdivisions {
            return QuadResult { value, error, evaluations, converged: false };
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => return QuadResult { value, error, evaluations, converged: true },
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid == worst.a || mid == worst.b {
            heap.push(worst);
            let (value, error) = heap
                .iter()
                .fold((T::default(), 0.0), |(v, e), s| (v + s.value, e + s.error));
            return QuadResult { value, error, evaluations, converged: false };
        }
        heap.push(gk21(&mut f, worst.a, mid));
        heap.push(gk21(&mut f, mid, worst.b));
        evaluations += 42;
        subdivisions += 1;
    }
}

/// Computes `∫_a^b f(s) (b - s)^q ds` for `q > -1` by the substitution
/// `b - s = w^{1/(q+1)}`, which turns the weight into a constant.
pub fn integrate_right_power<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    b: f64,
    q: f64,
    opts: &QuadOptions,
) -> QuadResult<T> {
    let gamma = 1.0 / (q + 1.0);
    let top = (b - a).powf(q + 1.0);
    let mut r = integrate(|w: f64| f(b - w.powf(gamma)), 0.0, top, opts);
    r.value = r.value * gamma;
    r.error *= gamma;
    r
}

/// Computes `∫_a^b f(s) (s - a)^q ds` for `q > -1`.
pub fn integrate_left_power<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    b: f64,
    q: f64,
    opts: &QuadOptions,
) -> QuadResult<T> {
    let gamma = 1.0 / (q + 1.0);
    let top = (b - a).powf(q + 1.0);
    let mut r = integrate(|w: f64| f(a + w.powf(gamma)), 0.0, top, opts);
    r.value = r.value * gamma;
    r.error *= gamma;
    r
}

/// `∫_a^b f(s) (s - a)^p ds` for `p > -1`: a power substitution when the
/// weight is singular (`p < 0`), plain adaptive quadrature otherwise.
pub fn integrate_left_weighted<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    b: f64,
    p: f64,
    opts: &QuadOptions,
) -> QuadResult<T> {
    if p < 0.0 {
        integrate_left_power(f, a, b, p, opts)
    } else {
        integrate(|s: f64| f(s) * (s - a).max(0.0).powf(p), a, b, opts)
    }
}

/// `∫_a^b f(s) (b - s)^p ds` for `p > -1`, as [`integrate_left_weighted`].
pub fn integrate_right_weighted<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    b: f64,
    p: f64,
    opts: &QuadOptions,
) -> QuadResult<T> {
    if p < 0.0 {
        integrate_right_power(f, a, b, p, opts)
    } else {
        integrate(|s: f64| f(s) * (b - s).max(0.0).powf(p), a, b, opts)
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    x.iter().zip(w.iter()).map(|(&x, &w)| (c + h * x, h * w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x: f64| x.powi(5) - 3.0 * x * x, -1.0, 2.0, &QuadOptions::default());
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((r.value - exact).abs() < 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let opts = QuadOptions::new(1e-12, 1e-12).with_max_subdivisions(2000);
        let r = integrate(|x: f64| x.sqrt().ln(), 0.0, 1.0, &opts);
        assert!((r.value + 0.5).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn power_weights() {
        let opts = QuadOptions::new(1e-14, 1e-13);
        // ∫_0^1 (1-s)^{-1/2} ds = 2, ∫_0^1 s^{-2/3} cos(s) ds
        let r = integrate_right_power(|_| 1.0, 0.0, 1.0, -0.5, &opts);
        assert!((r.value - 2.0).abs() < 1e-13);
        let r = integrate_left_power(|s: f64| s.cos(), 0.0, 1.0, -2.0 / 3.0, &opts);
        let series: f64 = (0..20)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let fact: f64 = (1..=2 * k).map(|i| i as f64).product();
                sign / (fact * (2.0 * k as f64 + 1.0 / 3.0))
            })
            .sum();
        assert!((r.value - series).abs() < 1e-12);
    }

    #[test]
    fn complex_integrand() {
        let r = integrate(
            |x: f64| Complex64::new(0.0, x).exp(),
            0.0,
            std::f64::consts::PI,
            &QuadOptions::default(),
        );
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn legendre_rules() {
        for n in [1, 2, 5, 16, 40] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13);
            let m = 2 * n - 1;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(m as i32 - 1)).sum();
            let exact = if (m - 1) % 2 == 0 { 2.0 / m as f64 } else { 0.0 };
            assert!((s - exact).abs() < 1e-13, "n={n}");
        }
    }
}
