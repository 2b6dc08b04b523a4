use crate::error::{domain, Error, Result};
use crate::geometry::{to_y, SourcePoint};
use crate::quad::{box_radial_range, integrate, sphere_integral, QuadOptions};

use super::bump::{SupportBox, TestFunction};

/// A function `P` whose level sets carry delta layers `δ^{(q)}(P)`.
pub trait LevelSet: Sync {
    /// Ambient dimension.
    fn dim(&self) -> usize;

    /// `∫_{P = p} f dS / |∇P|` over the part of the level set inside
    /// `support`, leaving out a neighbourhood of size `excision` around the
    /// critical points of `P`.
    fn trace(
        &self,
        p: f64,
        f: &(dyn Fn(&[f64]) -> f64 + Sync),
        support: &SupportBox,
        excision: f64,
        opts: &QuadOptions,
    ) -> Result<f64>;

    /// Typical variation of `P` over the box; difference steps in the level
    /// value are fractions of it.
    fn level_scale(&self, support: &SupportBox) -> f64;

    /// Length scale of the critical set of `P`, if it has one.
    fn critical_scale(&self) -> Option<f64> {
        None
    }
}

/// `P(s) = slope · (s - offset)` on `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine1d {
    pub offset: f64,
    pub slope: f64,
}

impl LevelSet for Affine1d {
    fn dim(&self) -> usize {
        1
    }

    fn trace(
        &self,
        p: f64,
        f: &(dyn Fn(&[f64]) -> f64 + Sync),
        support: &SupportBox,
        _excision: f64,
        _opts: &QuadOptions,
    ) -> Result<f64> {
        if self.slope == 0.0 {
            return Err(Error::Degenerate("constant function has no regular level set".into()));
        }
        let s = self.offset + p / self.slope;
        if !support.contains(&[s]) {
            return Ok(0.0);
        }
        Ok(f(&[s]) / self.slope.abs())
    }

    fn level_scale(&self, support: &SupportBox) -> f64 {
        self.slope.abs() * (support.hi[0] - support.lo[0])
    }
}

/// `P(x, y) = scale · (ρ(y)² - |x|²)` on the forward sheet `y ≤ b` of the
/// characteristic conoid of `source` in `R^{n+1}`.  With `scale = 1` this is
/// the pullback of the cone function `k`; with `scale = -9` it is `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeLevelSet {
    source: SourcePoint,
    n: usize,
    scale: f64,
}

impl ConeLevelSet {
    pub fn new(source: SourcePoint, n: usize, scale: f64) -> Result<Self> {
        if n == 0 {
            return domain("space dimension must be at least 1");
        }
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::Degenerate(format!("cone scale {scale} gives no level set")));
        }
        Ok(ConeLevelSet { source, n, scale })
    }

    pub fn source(&self) -> &SourcePoint {
        &self.source
    }
}

impl LevelSet for ConeLevelSet {
    fn dim(&self) -> usize {
        self.n + 1
    }

    fn trace(
        &self,
        p: f64,
        f: &(dyn Fn(&[f64]) -> f64 + Sync),
        support: &SupportBox,
        excision: f64,
        opts: &QuadOptions,
    ) -> Result<f64> {
        let n = self.n;
        if support.dim() != n + 1 {
            return domain("support dimension must be n + 1");
        }
        let x_lo = &support.lo[..n];
        let x_hi = &support.hi[..n];
        let y_top = if excision > 0.0 { to_y(self.source.t0() + excision)? } else { self.source.b() };
        let y_lo = support.lo[n];
        let y_hi = support.hi[n].min(y_top);
        if y_hi <= y_lo {
            return Ok(0.0);
        }
        let shift = p / self.scale;
        let weight = 0.5 / self.scale.abs();
        let inner_opts = QuadOptions::new(opts.abs_tol * 1e-2, opts.rel_tol * 1e-2);
        let (near, far) = box_radial_range(x_lo, x_hi);
        let slice = |y: f64| -> f64 {
            let rho = self.source.cone_radius(y).unwrap_or(0.0);
            let r2 = rho * rho - shift;
            if r2 <= 0.0 {
                return 0.0;
            }
            let r = r2.sqrt();
            if r < near || r > far {
                return 0.0;
            }
            let mut g = |x: &[f64]| {
                let mut pt = Vec::with_capacity(n + 1);
                pt.extend_from_slice(x);
                pt.push(y);
                f(&pt)
            };
            let mean = sphere_integral(r, x_lo, x_hi, &mut g, &inner_opts);
            weight * r.powi(n as i32 - 2) * mean
        };
        let r = integrate(slice, y_lo, y_hi, opts);
        Ok(r.value)
    }

    fn level_scale(&self, support: &SupportBox) -> f64 {
        let (_, far) = box_radial_range(&support.lo[..self.n], &support.hi[..self.n]);
        self.scale.abs() * far.max(self.source.t0()).powi(2)
    }

    fn critical_scale(&self) -> Option<f64> {
        Some(self.source.t0())
    }
}

/// `factor · P` for a positive constant `factor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled<L> {
    pub inner: L,
    pub factor: f64,
}

impl<L: LevelSet> LevelSet for Scaled<L> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn trace(
        &self,
        p: f64,
        f: &(dyn Fn(&[f64]) -> f64 + Sync),
        support: &SupportBox,
        excision: f64,
        opts: &QuadOptions,
    ) -> Result<f64> {
        if !(self.factor > 0.0) {
            return Err(Error::Degenerate(format!("scale factor {} must be positive", self.factor)));
        }
        Ok(self.inner.trace(p / self.factor, f, support, excision, opts)? / self.factor)
    }

    fn level_scale(&self, support: &SupportBox) -> f64 {
        self.factor * self.inner.level_scale(support)
    }

    fn critical_scale(&self) -> Option<f64> {
        self.inner.critical_scale()
    }
}

/// Numerical settings for [`delta_layer_action`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerOptions {
    /// Difference step in the level value, relative to the level scale.
    pub step_fraction: f64,
    /// Number of Richardson levels (step halvings).
    pub levels: usize,
    /// Excision size around a critical point, relative to its length scale.
    pub excision_fraction: f64,
    pub quad: QuadOptions,
}

impl Default for LayerOptions {
    fn default() -> Self {
        LayerOptions {
            step_fraction: 1e-3,
            levels: 3,
            excision_fraction: 1e-4,
            quad: QuadOptions::new(1e-13, 1e-10).with_max_subdivisions(2000),
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `⟨a · δ^{(order)}(P), φ⟩ = (-1)^order d^order/dp^order ∫_{P=p} a φ dS/|∇P|`
/// at `p = 0`.  Derivatives in `p` are central differences refined by
/// Richardson extrapolation; a critical point of `P` is excised and the
/// excision size extrapolated to zero.
pub fn delta_layer_action<T: TestFunction + ?Sized>(
    order: usize,
    coeff: &(dyn Fn(&[f64]) -> f64 + Sync),
    surface: &dyn LevelSet,
    phi: &T,
    opts: &LayerOptions,
) -> Result<f64> {
    if phi.dim() != surface.dim() {
        return domain("test function and level set live in different dimensions");
    }
    let support = phi.support();
    let f = |p: &[f64]| coeff(p) * phi.eval(p);
    let h0 = opts.step_fraction * surface.level_scale(&support);
    let derivative = |excision: f64| -> Result<f64> {
        if order == 0 {
            return surface.trace(0.0, &f, &support, excision, &opts.quad);
        }
        let mut table = Vec::with_capacity(opts.levels);
        for level in 0..opts.levels.max(1) {
            let h = h0 / 2f64.powi(level as i32);
            let mut acc = 0.0;
            for i in 0..=order {
                let node = (order as f64 / 2.0 - i as f64) * h;
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binomial(order, i) * surface.trace(node, &f, &support, excision, &opts.quad)?;
            }
            table.push(acc / h.powi(order as i32));
        }
        // error expansion in even powers of h
        let mut factor = 4.0;
        while table.len() > 1 {
            table = table.windows(2).map(|w| (factor * w[1] - w[0]) / (factor - 1.0)).collect();
            factor *= 4.0;
        }
        Ok(table[0])
    };
    let value = match surface.critical_scale() {
        Some(scale) => {
            let eps = opts.excision_fraction * scale;
            2.0 * derivative(0.5 * eps)? - derivative(eps)?
        }
        None => derivative(0.0)?,
    };
    Ok(if order % 2 == 0 { value } else { -value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chi::{BumpTestFunction, Smooth1d};

    #[test]
    fn flat_layer_is_point_evaluation() {
        let phi = BumpTestFunction::new(&[0.8], 0.5, 1.0).unwrap();
        let one = |_: &[f64]| 1.0;
        let surf = Affine1d { offset: 1.0, slope: 1.0 };
        let v = delta_layer_action(0, &one, &surf, &phi, &LayerOptions::default()).unwrap();
        assert!((v - phi.eval(&[1.0])).abs() < 1e-15);
        // δ'(s - 1) pairs to -φ'(1)
        let v = delta_layer_action(1, &one, &surf, &phi, &LayerOptions::default()).unwrap();
        let d1 = Smooth1d::derivative(&phi, 1, 1.0);
        assert!((v + d1).abs() < 1e-9 * d1.abs().max(1.0), "{v} vs {}", -d1);
        let v = delta_layer_action(2, &one, &surf, &phi, &LayerOptions::default()).unwrap();
        let d2 = Smooth1d::derivative(&phi, 2, 1.0);
        assert!((v - d2).abs() < 1e-7 * d2.abs().max(1.0), "{v} vs {d2}");
    }

    #[test]
    fn degenerate_level_set() {
        let phi = BumpTestFunction::new(&[0.0], 1.0, 1.0).unwrap();
        let surf = Affine1d { offset: 0.0, slope: 0.0 };
        let r = delta_layer_action(0, &|_: &[f64]| 1.0, &surf, &phi, &LayerOptions::default());
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }
}
