use std::f64::consts::PI;

use num_complex::Complex64;

use crate::chi::chi_pointwise;
use crate::error::{domain, Error, Result};
use crate::geometry::{classify_radial, limit_boundary_radius, limit_form, norm, split_point, to_t, RegionTag, SourcePoint};
use crate::specfun::{gamma, hyp2f1, hyp2f1_real, Branch, BranchedValue, HypTriple};

use super::coefficients::layer_coefficient;
use super::constants::{a_m, c_of_n, constants};

/// The three families of closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    One,
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Result<Self> {
        match n {
            0 => domain("space dimension must be at least 1"),
            1 => Ok(Parity::One),
            n if n % 2 == 0 => Ok(Parity::Even),
            _ => Ok(Parity::Odd),
        }
    }
}

/// Dimension, source point and branch choice of a kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub n: usize,
    pub parity: Parity,
    pub source: SourcePoint,
    pub branch: Branch,
}

impl KernelSpec {
    pub fn new(n: usize, source: SourcePoint, branch: Branch) -> Result<Self> {
        Ok(KernelSpec { n, parity: Parity::of(n)?, source, branch })
    }

    /// `m = (n - 1)/2` for odd `n`.
    pub fn m(&self) -> Option<usize> {
        (self.parity == Parity::Odd).then_some((self.n - 1) / 2)
    }
}

/// `u` and `v` at `|x| = r`, `y ≤ 0`, in the factored forms
/// `9(r - ρ)(r + ρ)` and `9(r - t - t0)(r + t + t0)` with `ρ = t - t0`.
pub fn uv_factored(r: f64, y: f64, a: f64) -> Result<(f64, f64)> {
    if y > 0.0 {
        return domain(format!("uv requires y <= 0, got {y}"));
    }
    let t = 2.0 * (-y).powf(1.5) / 3.0;
    let rho = t - a;
    let w = t + a;
    Ok((9.0 * (r - rho) * (r + rho), 9.0 * (r - w) * (r + w)))
}

fn triple(a: f64, b: f64, c: f64) -> HypTriple {
    HypTriple::new(a, b, c).expect("parameters fixed by the dimension")
}

/// The absolutely continuous part of `E₋` at `|x| = r`: zero outside the
/// conoid, `+∞` on its boundary for even `n`.
pub fn e_minus_radial(spec: &KernelSpec, r: f64, y: f64) -> Result<f64> {
    if y > 0.0 || y > spec.source.b() {
        return Ok(0.0);
    }
    let (u, v) = uv_factored(r, y, spec.source.a())?;
    if u > 0.0 || (u == 0.0 && y == spec.source.b()) {
        return Ok(0.0);
    }
    if v >= 0.0 {
        return Err(Error::Singular(format!("v = {v} inside the conoid at r = {r}, y = {y}")));
    }
    let zeta = u / v;
    let nf = spec.n as f64;
    match spec.parity {
        Parity::One => {
            Ok((-v).powf(-1.0 / 6.0) / 2f64.powf(1.0 / 3.0) * hyp2f1_real(triple(1.0 / 6.0, 1.0 / 6.0, 1.0), zeta)?)
        }
        Parity::Even => {
            if u == 0.0 {
                return Ok(f64::INFINITY);
            }
            let f = hyp2f1_real(triple(2.0 / 3.0 - nf / 2.0, 1.0 / 6.0, 1.5 - nf / 2.0), zeta)?;
            Ok(c_of_n(spec.n)? * (-u).powf(0.5 - nf / 2.0) * (-v).powf(-1.0 / 6.0) * f)
        }
        Parity::Odd => {
            let m = (spec.n - 1) / 2;
            let mf = m as f64;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let f = hyp2f1_real(triple(1.0 / 6.0, mf + 1.0 / 6.0, mf + 1.0), zeta)?;
            Ok(sign * a_m(m) * layer_coefficient(m) * (-v / 9.0).powf(-mf - 1.0 / 6.0) * f)
        }
    }
}

/// `E₋` at `point = (x, y)`; see [`e_minus_radial`].
pub fn eval_e_minus(spec: &KernelSpec, point: &[f64]) -> Result<f64> {
    let (x, y) = split_point(point);
    check_dim(spec.n, x)?;
    e_minus_radial(spec, norm(x), y)
}

/// The same density written in the variables `(x, t)`, `t = 2(-y)^{3/2}/3`,
/// through `k = (t - t0)² - |x|²` and `(t + t0)² - |x|²`.
pub fn e_minus_xt(spec: &KernelSpec, r: f64, t: f64) -> Result<f64> {
    let t0 = spec.source.t0();
    let tau = t - t0;
    if !(tau > r) {
        return Ok(0.0);
    }
    let k = tau * tau - r * r;
    let w = (t + t0) * (t + t0) - r * r;
    let zeta = k / w;
    let nf = spec.n as f64;
    let norm23 = 2f64.powf(1.0 / 3.0) * 3f64.powf(1.0 / 3.0);
    match spec.parity {
        Parity::One => Ok(chi_pointwise(0.0, k)? * w.powf(-1.0 / 6.0) / norm23
            * hyp2f1_real(triple(1.0 / 6.0, 1.0 / 6.0, 1.0), zeta)?),
        Parity::Even => {
            let q = 0.5 - nf / 2.0;
            let chi = k.powf(q) / gamma(q + 1.0)?;
            Ok(PI.powf(q) / norm23 * chi * w.powf(-1.0 / 6.0)
                * hyp2f1_real(triple(2.0 / 3.0 - nf / 2.0, 1.0 / 6.0, 1.5 - nf / 2.0), zeta)?)
        }
        Parity::Odd => {
            let m = (spec.n - 1) / 2;
            let mf = m as f64;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sign * a_m(m) * layer_coefficient(m) * w.powf(-mf - 1.0 / 6.0)
                * hyp2f1_real(triple(1.0 / 6.0, mf + 1.0 / 6.0, mf + 1.0), zeta)?)
        }
    }
}

/// `(-v)^{-1/6} F(1/6, 1/6; 1; u/v) / 2^{1/3}` continued off the conoid.
/// For `v > 0` the argument lies on the cut and `branch` selects both the
/// side of the cut and the matching value of `arg(-v) = ±π` (`UpperCut` pairs
/// with `+π`).  For `y > 0` see [`tilde_e_elliptic`].
pub fn tilde_e_radial(r: f64, y: f64, source: &SourcePoint, branch: Branch) -> Result<BranchedValue> {
    if y > 0.0 {
        return tilde_e_elliptic(r, y, source, branch);
    }
    let p = triple(1.0 / 6.0, 1.0 / 6.0, 1.0);
    let norm = 2f64.powf(-1.0 / 3.0);
    let (u, v) = uv_factored(r, y, source.a())?;
    if v == 0.0 {
        return Err(Error::Singular(format!("tilde E is singular on v = 0 (r = {r}, y = {y})")));
    }
    let zeta = Complex64::new(u / v, 0.0);
    if v < 0.0 {
        let f = hyp2f1(p, zeta, None)?;
        return Ok(BranchedValue { value: f.value * (-v).powf(-1.0 / 6.0) * norm, branch: None });
    }
    let theta = match branch {
        Branch::LowerCut => -PI,
        Branch::UpperCut => PI,
    };
    let pre = Complex64::from_polar(v.powf(-1.0 / 6.0), -theta / 6.0);
    let f = hyp2f1(p, zeta, Some(branch))?;
    Ok(BranchedValue { value: pre * f.value * norm, branch: Some(branch) })
}

/// The continuation of [`tilde_e_radial`] into `y > 0` that is real-analytic
/// across `y = 0`.
///
/// On `y = 0` the argument `u/v` equals 1, and near `t = 0` the kernel splits
/// as `A(t²) + t^{2/3} B(t²)` through the connection formula at `ζ = 1`.
/// With `t = ±i(2/3)y^{3/2}` (sign from `branch`, as in `complex_uv`) and
/// `t^{2/3}` replaced by its analytic continuation `(2/3)^{2/3}(-y)`, both
/// parts stay solutions.  Where `ζ` passes `-1` (only for `|x| < a`) the two
/// connection terms are continued across their cut.
///
/// Continued from `|x| < a`, the value reaching `|x| > a` is the sum of both
/// branch values, so the result jumps on the ray `|x| = a, y > 0`.
pub fn tilde_e_elliptic(r: f64, y: f64, source: &SourcePoint, branch: Branch) -> Result<BranchedValue> {
    if !(y > 0.0) {
        return domain(format!("the elliptic continuation needs y > 0, got {y}"));
    }
    let a = source.a();
    let (u, v) = crate::geometry::complex_uv_radial(r, y, a, branch)?;
    let w = -v / 9.0;
    let z = (v - u) / v;
    let g = |x: f64| gamma(x).expect("fixed arguments");
    let c_p = g(2.0 / 3.0) / (g(5.0 / 6.0) * g(5.0 / 6.0));
    let c_q = g(-2.0 / 3.0) / (g(1.0 / 6.0) * g(1.0 / 6.0));
    let mut f_p = hyp2f1(triple(1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0), z, None)?.value;
    let mut f_q = hyp2f1(triple(5.0 / 6.0, 5.0 / 6.0, 5.0 / 3.0), z, None)?.value;
    if r < a && limit_form(r, y) - 9.0 * a * a > 0.0 {
        // z has crossed (1, ∞) away from the side it started on
        let zeta = u / v;
        let s = match branch {
            Branch::UpperCut => 1.0,
            Branch::LowerCut => -1.0,
        };
        let two_pi_i = Complex64::new(0.0, 2.0 * PI * s);
        f_p += two_pi_i * g(1.0 / 3.0) / (g(1.0 / 6.0) * g(1.0 / 6.0))
            * hyp2f1(triple(1.0 / 6.0, 1.0 / 6.0, 1.0), zeta, None)?.value;
        f_q += two_pi_i * g(5.0 / 3.0) / (g(5.0 / 6.0) * g(5.0 / 6.0))
            * hyp2f1(triple(5.0 / 6.0, 5.0 / 6.0, 1.0), zeta, None)?.value;
    }
    let t23 = -(2f64 / 3.0).powf(2.0 / 3.0) * y;
    let scale = (Complex64::new(4.0 * a, 0.0) / w).powf(2.0 / 3.0);
    let value = (9.0 * w).powf(-1.0 / 6.0) * 2f64.powf(-1.0 / 3.0) * (c_p * f_p + t23 * scale * c_q * f_q);
    Ok(BranchedValue { value, branch: Some(branch) })
}

/// `(-v)^{-1/6} F(1/6, 1/6; 1; u/v) / 2^{1/3}` at `y > 0` with the principal
/// branches taken at the complex `u`, `v` of `complex_uv`.  This solves the
/// equation in `y > 0` but its `y`-derivative jumps across `y = 0`; kept for
/// comparison with [`tilde_e_elliptic`].
pub fn tilde_e_principal(r: f64, y: f64, source: &SourcePoint, branch: Branch) -> Result<BranchedValue> {
    if !(y > 0.0) {
        return domain(format!("the complex continuation needs y > 0, got {y}"));
    }
    let (u, v) = crate::geometry::complex_uv_radial(r, y, source.a(), branch)?;
    let f = hyp2f1(triple(1.0 / 6.0, 1.0 / 6.0, 1.0), u / v, None)?;
    Ok(BranchedValue { value: (-v).powf(-1.0 / 6.0) * f.value * 2f64.powf(-1.0 / 3.0), branch: Some(branch) })
}

pub fn eval_tilde_e(point: &[f64], source: &SourcePoint, branch: Branch) -> Result<BranchedValue> {
    let (x, y) = split_point(point);
    check_dim(1, x)?;
    tilde_e_radial(norm(x), y, source, branch)
}

/// `E₊ = -Ẽ` off the closed conoid and `0` inside it.
pub fn e_plus_radial(r: f64, y: f64, source: &SourcePoint, branch: Branch) -> Result<BranchedValue> {
    if classify_radial(r, y, source) == RegionTag::DMinusInterior {
        return Ok(BranchedValue { value: Complex64::new(0.0, 0.0), branch: None });
    }
    let e = tilde_e_radial(r, y, source, branch)?;
    Ok(BranchedValue { value: -e.value, branch: e.branch })
}

pub fn eval_e_plus(point: &[f64], source: &SourcePoint, branch: Branch) -> Result<BranchedValue> {
    let (x, y) = split_point(point);
    check_dim(1, x)?;
    e_plus_radial(norm(x), y, source, branch)
}

fn limit_value(r: f64, y: f64) -> Result<f64> {
    let f = if y < 0.0 {
        let big_r = limit_boundary_radius(y);
        9.0 * (r - big_r) * (r + big_r)
    } else {
        limit_form(r, y)
    };
    if f == 0.0 {
        return Err(Error::Singular(format!("point (r = {r}, y = {y}) lies on 9|x|^2 + 4y^3 = 0")));
    }
    Ok(f)
}

/// The limit `b → 0⁻` of `E₋`: `C₋ |9|x|² + 4y³|^{1/3-n/2}` below the curve
/// `9|x|² + 4y³ = 0`, zero above it.
pub fn f_minus_radial(n: usize, r: f64, y: f64) -> Result<f64> {
    let f = limit_value(r, y)?;
    if f > 0.0 {
        return Ok(0.0);
    }
    Ok(constants(n)?.f_minus_constant() * (-f).powf(1.0 / 3.0 - n as f64 / 2.0))
}

/// `C₊ (9|x|² + 4y³)^{1/3-n/2}` above the curve, zero below it.
pub fn f_plus_radial(n: usize, r: f64, y: f64) -> Result<f64> {
    let f = limit_value(r, y)?;
    if f < 0.0 {
        return Ok(0.0);
    }
    Ok(constants(n)?.f_plus_constant() * f.powf(1.0 / 3.0 - n as f64 / 2.0))
}

pub fn eval_f_minus(n: usize, point: &[f64]) -> Result<f64> {
    let (x, y) = split_point(point);
    check_dim(n, x)?;
    f_minus_radial(n, norm(x), y)
}

pub fn eval_f_plus(n: usize, point: &[f64]) -> Result<f64> {
    let (x, y) = split_point(point);
    check_dim(n, x)?;
    f_plus_radial(n, norm(x), y)
}

fn check_dim(n: usize, x: &[f64]) -> Result<()> {
    if x.len() != n {
        return domain(format!("expected {} coordinates, got {}", n + 1, x.len() + 1));
    }
    Ok(())
}

/// One surface term `weight · ((u - v)/9)^{-j-1/6} · δ^{(order)}(K)` of the
/// odd-`n` kernel, where `K = (t - t0)² - |x|² = -u/9` and
/// `(u - v)/9 = 4 t0 t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerTerm {
    pub j: usize,
    pub order: usize,
    /// `A_m (-1)^j c_j`.
    pub weight: f64,
}

impl LayerTerm {
    /// The smooth coefficient at height `y < 0`.
    pub fn coefficient(&self, source: &SourcePoint, y: f64) -> Result<f64> {
        let t = to_t(y)?;
        let g = 4.0 * source.t0() * t;
        if !(g > 0.0) {
            return domain(format!("layer coefficient needs y < 0, got {y}"));
        }
        Ok(self.weight * g.powf(-(self.j as f64) - 1.0 / 6.0))
    }
}

pub fn singular_layers(spec: &KernelSpec) -> Result<Vec<LayerTerm>> {
    let Some(m) = spec.m() else {
        return domain(format!("surface layers exist only for odd n >= 3, got n = {}", spec.n));
    };
    Ok((0..m)
        .map(|j| LayerTerm {
            j,
            order: m - j - 1,
            weight: a_m(m) * if j % 2 == 0 { 1.0 } else { -1.0 } * layer_coefficient(j),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, b: f64) -> KernelSpec {
        KernelSpec::new(n, SourcePoint::new(b).unwrap(), Branch::LowerCut).unwrap()
    }

    #[test]
    fn outside_support_is_zero() {
        let s = spec(1, -1.0);
        assert_eq!(eval_e_minus(&s, &[5.0, -2.0]).unwrap(), 0.0);
        assert_eq!(eval_e_minus(&s, &[0.0, -0.5]).unwrap(), 0.0);
        assert_eq!(eval_e_minus(&s, &[0.0, 1.0]).unwrap(), 0.0);
        assert!(eval_e_minus(&s, &[0.0, -2.0]).unwrap() > 0.0);
    }

    #[test]
    fn tilde_matches_e_minus_inside() {
        let s = spec(1, -1.0);
        let e = eval_e_minus(&s, &[0.3, -2.0]).unwrap();
        let t = eval_tilde_e(&[0.3, -2.0], &s.source, Branch::UpperCut).unwrap();
        assert!((t.value.re - e).abs() < 1e-14 && t.value.im.abs() < 1e-14);
    }

    #[test]
    fn branches_conjugate() {
        let src = SourcePoint::new(-1.0).unwrap();
        for p in [[3.0, -1.0], [1.0, 0.5], [0.2, 2.0], [3.0, 0.0]] {
            let up = eval_tilde_e(&p, &src, Branch::UpperCut).unwrap().value;
            let lo = eval_tilde_e(&p, &src, Branch::LowerCut).unwrap().value;
            assert!((up - lo.conj()).norm() < 1e-13 * up.norm(), "{p:?}");
        }
        assert!(eval_tilde_e(&[src.a(), 0.0], &src, Branch::UpperCut).is_err());
    }

    #[test]
    fn layers_have_expected_orders() {
        assert!(singular_layers(&spec(2, -1.0)).is_err());
        let l3 = singular_layers(&spec(3, -1.0)).unwrap();
        assert_eq!(l3.len(), 1);
        assert_eq!(l3[0].order, 0);
        let l5 = singular_layers(&spec(5, -1.0)).unwrap();
        assert_eq!(l5.iter().map(|l| l.order).collect::<Vec<_>>(), vec![1, 0]);
        assert!((l5[1].weight / l5[0].weight + 5.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn limit_kernels() {
        assert!((eval_f_minus(1, &[0.0, -1.0]).unwrap() - 0.6695).abs() < 1e-4);
        assert_eq!(eval_f_minus(1, &[1.0, -0.5]).unwrap(), 0.0);
        assert!(eval_f_minus(1, &[2.0 / 3.0, -1.0]).is_err());
        assert!(eval_f_plus(2, &[1.0, 0.0, 0.3]).unwrap() < 0.0);
    }
}
