//! The hyperbolic change of variables `t = 2(-y)^{3/2}/3`, the cone function
//! `k`, the characteristic quadratic forms `u`, `v`, and region
//! classification relative to a source point `(0, b)`.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::specfun::Branch;

/// Relative tolerance under which `u` counts as zero when classifying.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// `t = 2(-y)^{3/2}/3` for `y < 0`.
pub fn to_t(y: f64) -> Result<f64> {
    if !(y < 0.0) {
        return domain(format!("to_t requires y < 0, got {y}"));
    }
    Ok(2.0 * (-y).powf(1.5) / 3.0)
}

/// `y = -(3t/2)^{2/3}` for `t > 0`.
pub fn to_y(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("to_y requires t > 0, got {t}"));
    }
    Ok(-(1.5 * t).powf(2.0 / 3.0))
}

/// `|∂(x, y)/∂(x, t)| = |dy/dt| = (2/3)^{1/3} t^{-1/3}`.
pub fn jacobian_y_per_t(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("jacobian requires t > 0, got {t}"));
    }
    Ok((2.0f64 / 3.0).powf(1.0 / 3.0) * t.powf(-1.0 / 3.0))
}

/// The source point `(0, b)` with `b < 0`, together with
/// `a = t0 = 2(-b)^{3/2}/3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourcePoint {
    b: f64,
    a: f64,
}

impl SourcePoint {
    pub fn new(b: f64) -> Result<Self> {
        if !(b < 0.0 && b.is_finite()) {
            return domain(format!("the source must lie in y < 0, got b = {b}"));
        }
        Ok(SourcePoint { b, a: to_t(b)? })
    }

    pub fn from_a(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return domain(format!("a must be positive, got {a}"));
        }
        Ok(SourcePoint { b: to_y(a)?, a })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn t0(&self) -> f64 {
        self.a
    }

    /// Radius `ρ(y) = t(y) - t0` of the characteristic conoid `u = 0` at
    /// height `y ≤ b`.
    pub fn cone_radius(&self, y: f64) -> Result<f64> {
        if !(y <= self.b) {
            return domain(format!("the conoid exists only for y <= b = {}, got {y}", self.b));
        }
        Ok((2.0 * (-y).powf(1.5) / 3.0 - self.a).max(0.0))
    }

    /// Radius `t(y) + t0` of the surface `v = 0` at height `y ≤ 0`.
    pub fn v_zero_radius(&self, y: f64) -> f64 {
        2.0 * (-y).max(0.0).powf(1.5) / 3.0 + self.a
    }
}

/// `k(x, t - t0) = (t - t0)² - |x|²` inside the forward cone, else 0.
pub fn k_val(x: &[f64], t: f64, t0: f64) -> f64 {
    let r2: f64 = x.iter().map(|c| c * c).sum();
    let tau = t - t0;
    if tau > 0.0 && tau * tau > r2 {
        tau * tau - r2
    } else {
        0.0
    }
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// `u`, `v` at `|x| = r`, `y ≤ 0`.
pub fn uv_radial(r: f64, y: f64, a: f64) -> Result<(f64, f64)> {
    if y > 0.0 {
        return domain(format!("uv requires y <= 0, got {y}; use complex_uv"));
    }
    let s = (-y).powf(1.5);
    let base = 9.0 * (r * r - a * a) + 4.0 * y * y * y;
    Ok((base + 12.0 * a * s, base - 12.0 * a * s))
}

/// `u = 9(|x|² - a²) + 12a(-y)^{3/2} + 4y³`, `v = 9(|x|² - a²) - 12a(-y)^{3/2} + 4y³`.
pub fn uv(x: &[f64], y: f64, a: f64) -> Result<(f64, f64)> {
    uv_radial(norm(x), y, a)
}

/// `u`, `v` for `y > 0` with `(-y)^{3/2} = -i y^{3/2}` on the lower side and
/// `+i y^{3/2}` on the upper side; the two results are conjugate.
pub fn complex_uv_radial(r: f64, y: f64, a: f64, branch: Branch) -> Result<(Complex64, Complex64)> {
    if !(y > 0.0) {
        return domain(format!("complex_uv requires y > 0, got {y}"));
    }
    let s = match branch {
        Branch::LowerCut => -y.powf(1.5),
        Branch::UpperCut => y.powf(1.5),
    };
    let base = 9.0 * (r * r - a * a) + 4.0 * y * y * y;
    Ok((Complex64::new(base, 12.0 * a * s), Complex64::new(base, -12.0 * a * s)))
}

pub fn complex_uv(x: &[f64], y: f64, a: f64, branch: Branch) -> Result<(Complex64, Complex64)> {
    complex_uv_radial(norm(x), y, a, branch)
}

/// Region of a point relative to the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionTag {
    /// `u < 0` and `y < b`: inside the characteristic conoid.
    DMinusInterior,
    /// `u = 0` and `y ≤ b`: on the conoid.
    DMinusBoundary,
    /// The rest of the closed lower half-space `y ≤ 0`.
    DPlus,
    /// `y > 0`.
    EllipticHalf,
}

impl RegionTag {
    pub fn name(&self) -> &'static str {
        match self {
            RegionTag::DMinusInterior => "DMinusInterior",
            RegionTag::DMinusBoundary => "DMinusBoundary",
            RegionTag::DPlus => "DPlus",
            RegionTag::EllipticHalf => "EllipticHalf",
        }
    }
}

pub fn classify_radial(r: f64, y: f64, source: &SourcePoint) -> RegionTag {
    if y > 0.0 {
        return RegionTag::EllipticHalf;
    }
    let (u, v) = uv_radial(r, y, source.a).expect("y <= 0");
    if y <= source.b && u.abs() <= BOUNDARY_TOL * v.abs().max(1.0) {
        RegionTag::DMinusBoundary
    } else if u < 0.0 && y < source.b {
        RegionTag::DMinusInterior
    } else {
        RegionTag::DPlus
    }
}

/// Classifies `(x, y)`; `point` holds the coordinates of `x` followed by `y`.
pub fn classify(point: &[f64], source: &SourcePoint) -> RegionTag {
    let (x, y) = split_point(point);
    classify_radial(norm(x), y, source)
}

/// Splits `(x_1, …, x_n, y)` into `x` and `y`.
pub fn split_point(point: &[f64]) -> (&[f64], f64) {
    let (y, x) = point.split_last().expect("a point has at least one coordinate");
    (x, *y)
}

/// Radius `ρ(y)` solving `u(ρ, y) = 0` on the conoid.
pub fn cone_boundary_radius(source: &SourcePoint, y: f64) -> Result<f64> {
    if y > source.b {
        return domain(format!("y = {y} lies above the vertex b = {}", source.b));
    }
    let a = source.a;
    let radicand = a * a - (12.0 * a * (-y).powf(1.5) + 4.0 * y.powi(3)) / 9.0;
    if radicand < -1e-12 * (a * a).max(1.0) {
        return Err(Error::Domain(format!("negative radicand {radicand} at y = {y}")));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// The value `9|x|² + 4y³` whose sign separates the limiting regions `D₋ⁿ`
/// (negative) and `D₊ⁿ` (positive).
pub fn limit_form(r: f64, y: f64) -> f64 {
    9.0 * r * r + 4.0 * y * y * y
}

/// Radius `(2/3)(-y)^{3/2}` of the limiting region boundary at height `y ≤ 0`.
pub fn limit_boundary_radius(y: f64) -> f64 {
    2.0 * (-y).max(0.0).powf(1.5) / 3.0
}
