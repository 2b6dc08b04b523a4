use std::sync::{Arc, OnceLock};

use crate::error::{domain, Result};

/// Highest derivative order tabulated for the 1-D kernel.
pub const MAX_DERIVATIVE_ORDER: usize = 13;

/// Axis-aligned box `[lo, hi]` containing the support of a test function.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SupportBox {
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter().zip(self.lo.iter().zip(&self.hi)).all(|(&x, (&l, &h))| x >= l && x <= h)
    }
}

/// A smooth, compactly supported function on `R^d`.
pub trait TestFunction: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, p: &[f64]) -> f64;
    fn support(&self) -> SupportBox;
}

/// A smooth function on `R` with compact support and derivatives of every
/// order.
pub trait Smooth1d: Sync {
    fn support_interval(&self) -> (f64, f64);
    fn derivative(&self, k: usize, s: f64) -> f64;
}

/// Tables `P_k` with `ψ^{(k)}(s) = P_k(s) (1 - s²)^{-2k} ψ(s)` for
/// `ψ(s) = exp(-1/(1 - s²))`; coefficients are integers, built exactly.
fn kernel_polynomials() -> &'static [Vec<f64>] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut polys: Vec<Vec<i128>> = vec![vec![1]];
        for k in 0..MAX_DERIVATIVE_ORDER {
            let p = &polys[k];
            let deg = p.len() + 3;
            let mut next = vec![0i128; deg + 1];
            // P_k' (1 - s²)²
            for (i, &c) in p.iter().enumerate().skip(1) {
                let d = c * i as i128;
                next[i - 1] += d;
                next[i + 1] -= 2 * d;
                next[i + 3] += d;
            }
            // 4k s (1 - s²) P_k - 2 s P_k
            for (i, &c) in p.iter().enumerate() {
                next[i + 1] += (4 * k as i128 - 2) * c;
                next[i + 3] -= 4 * k as i128 * c;
            }
            while next.len() > 1 && *next.last().unwrap() == 0 {
                next.pop();
            }
            polys.push(next);
        }
        polys.into_iter().map(|p| p.into_iter().map(|c| c as f64).collect()).collect()
    })
}

/// The `k`-th derivative of `ψ(s) = exp(-1/(1 - s²))` (zero for `|s| ≥ 1`).
pub fn kernel_derivative(k: usize, s: f64) -> f64 {
    assert!(k <= MAX_DERIVATIVE_ORDER, "derivative order {k} exceeds the table");
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let w = 1.0 - s * s;
    let poly = &kernel_polynomials()[k];
    let p = poly.iter().rev().fold(0.0, |acc, &c| acc * s + c);
    p * (-1.0 / w - 2.0 * k as f64 * w.ln()).exp()
}

/// `A ∏_i ψ((p_i - c_i)/R)`: a product of 1-D kernels, supported in the
/// cube of half-width `R` around the center.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpTestFunction {
    center: Arc<[f64]>,
    radius: f64,
    amplitude: f64,
}

impl BumpTestFunction {
    pub fn new(center: &[f64], radius: f64, amplitude: f64) -> Result<Self> {
        if center.is_empty() {
            return domain("bump center must have at least one coordinate");
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return domain(format!("bump radius must be positive, got {radius}"));
        }
        if !amplitude.is_finite() || center.iter().any(|c| !c.is_finite()) {
            return domain("non-finite bump parameter");
        }
        Ok(BumpTestFunction { center: center.into(), radius, amplitude })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// `sup |φ| = |A| e^{-d}`, attained at the center.
    pub fn sup_norm(&self) -> f64 {
        self.amplitude.abs() * (-(self.center.len() as f64)).exp()
    }

    /// Mixed partial derivative with the given order in each coordinate.
    pub fn derivative(&self, p: &[f64], orders: &[usize]) -> f64 {
        let mut v = self.amplitude;
        for (i, (&x, &c)) in p.iter().zip(self.center.iter()).enumerate() {
            let k = orders.get(i).copied().unwrap_or(0);
            let s = (x - c) / self.radius;
            if s.abs() >= 1.0 {
                return 0.0;
            }
            v *= kernel_derivative(k, s) / self.radius.powi(k as i32);
        }
        v
    }

    /// Second derivative along coordinate `i`.
    pub fn second_partial(&self, p: &[f64], i: usize) -> f64 {
        let mut orders = vec![0; self.center.len()];
        orders[i] = 2;
        self.derivative(p, &orders)
    }

    /// First derivative along coordinate `i`.
    pub fn first_partial(&self, p: &[f64], i: usize) -> f64 {
        let mut orders = vec![0; self.center.len()];
        orders[i] = 1;
        self.derivative(p, &orders)
    }
}

impl TestFunction for BumpTestFunction {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn eval(&self, p: &[f64]) -> f64 {
        self.derivative(p, &[])
    }

    fn support(&self) -> SupportBox {
        SupportBox {
            lo: self.center.iter().map(|c| c - self.radius).collect(),
            hi: self.center.iter().map(|c| c + self.radius).collect(),
        }
    }
}

impl Smooth1d for BumpTestFunction {
    fn support_interval(&self) -> (f64, f64) {
        (self.center[0] - self.radius, self.center[0] + self.radius)
    }

    /// Derivative in the first coordinate, the others held at the center.
    fn derivative(&self, k: usize, s: f64) -> f64 {
        let mut orders = vec![0; self.center.len()];
        orders[0] = k;
        let mut p = self.center.to_vec();
        p[0] = s;
        BumpTestFunction::derivative(self, &p, &orders)
    }
}

/// A test function given by a closure and a support box.
pub struct FnTestFunction<F> {
    support: SupportBox,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnTestFunction<F> {
    pub fn new(support: SupportBox, f: F) -> Self {
        FnTestFunction { support, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> TestFunction for FnTestFunction<F> {
    fn dim(&self) -> usize {
        self.support.dim()
    }

    fn eval(&self, p: &[f64]) -> f64 {
        (self.f)(p)
    }

    fn support(&self) -> SupportBox {
        self.support.clone()
    }
}

/// `s ↦ s φ(s)` for a 1-D test function `φ`.
pub struct TimesArgument<'a, T: ?Sized>(pub &'a T);

impl<T: Smooth1d + ?Sized> Smooth1d for TimesArgument<'_, T> {
    fn support_interval(&self) -> (f64, f64) {
        self.0.support_interval()
    }

    fn derivative(&self, k: usize, s: f64) -> f64 {
        let head = s * self.0.derivative(k, s);
        if k == 0 {
            head
        } else {
            head + k as f64 * self.0.derivative(k - 1, s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_derivatives_match_finite_differences() {
        for k in 0..8 {
            for &s in &[-0.7, -0.2, 0.0, 0.35, 0.8] {
                let h = 1e-5;
                let fd = (kernel_derivative(k, s + h) - kernel_derivative(k, s - h)) / (2.0 * h);
                let exact = kernel_derivative(k + 1, s);
                assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "k={k} s={s}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn table_is_exact_in_f64() {
        for p in kernel_polynomials() {
            for c in p {
                assert!(c.abs() < 2f64.powi(53), "coefficient {c} not exactly representable");
            }
        }
        assert_eq!(kernel_polynomials()[1], vec![0.0, -2.0]);
        // ψ'' = (6s⁴ - 2) / (1-s²)^4 ψ
        assert_eq!(kernel_polynomials()[2], vec![-2.0, 0.0, 0.0, 0.0, 6.0]);
    }

    #[test]
    fn support_and_norm() {
        let b = BumpTestFunction::new(&[0.5, -1.0], 0.25, 3.0).unwrap();
        assert_eq!(b.eval(&[0.76, -1.0]), 0.0);
        assert!((b.eval(&[0.5, -1.0]) - b.sup_norm()).abs() < 1e-15);
        assert!(b.support().contains(&[0.7, -0.8]));
        assert!(BumpTestFunction::new(&[0.0], 0.0, 1.0).is_err());
        assert_eq!(kernel_derivative(3, 1.0), 0.0);
        assert_eq!(kernel_derivative(0, 0.999_999_9), 0.0);
    }

    #[test]
    fn times_argument_derivatives() {
        let b = BumpTestFunction::new(&[0.3], 0.6, 1.0).unwrap();
        let m = TimesArgument(&b);
        let s = 0.41;
        let h = 1e-5;
        let fd = (m.derivative(1, s + h) - m.derivative(1, s - h)) / (2.0 * h);
        assert!((fd - m.derivative(2, s)).abs() < 1e-6 * m.derivative(2, s).abs().max(1.0));
    }
}
