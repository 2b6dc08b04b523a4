//! Numerical certificates for the fundamental-solution property: the
//! pairing `⟨E, 𝒯φ⟩` against bump test functions, compared with `φ(0, b)`.

mod limit;
mod matrix;
mod volume;

use std::fmt;
use std::time::Instant;

use crate::chi::{delta_layer_action, BumpTestFunction, ConeLevelSet, LayerOptions, SupportBox, TestFunction};
use crate::error::{domain, Result};
use crate::fundsol::{singular_layers, KernelSpec};
use crate::geometry::SourcePoint;
use crate::quad::QuadOptions;
use crate::specfun::Branch;

pub use limit::{limit_check, LimitRow};
pub use matrix::{standard_bumps, standard_matrix, BumpRole, MatrixEntry, MATRIX_SOURCE};
pub use volume::{green_bilinear_residual, integrate_over_box};

/// `y Δₓφ + φ_yy` at `point = (x, y)` from exact bump derivatives.
pub fn tricomi_apply(phi: &BumpTestFunction, point: &[f64]) -> f64 {
    let n = point.len() - 1;
    let y = point[n];
    let lap: f64 = (0..n).map(|i| phi.second_partial(point, i)).sum();
    y * lap + phi.second_partial(point, n)
}

/// `𝒯φ` viewed as a test function in its own right, restricted to the part
/// of the support kept by [`volume::folded_box`] and scaled to compensate.
/// Only pairings with radial kernels see the same value as with `𝒯φ`.
pub struct TricomiImage<'a> {
    phi: &'a BumpTestFunction,
    support: SupportBox,
    fold: f64,
}

impl<'a> TricomiImage<'a> {
    pub fn folded(phi: &'a BumpTestFunction) -> Self {
        let n = phi.dim() - 1;
        let (mut lo, mut hi, fold) = volume::folded_box(phi, n);
        let full = phi.support();
        lo.push(full.lo[n]);
        hi.push(full.hi[n]);
        TricomiImage { phi, support: SupportBox { lo, hi }, fold }
    }
}

impl TestFunction for TricomiImage<'_> {
    fn dim(&self) -> usize {
        self.phi.dim()
    }

    fn eval(&self, p: &[f64]) -> f64 {
        self.fold * tricomi_apply(self.phi, p)
    }

    fn support(&self) -> SupportBox {
        self.support.clone()
    }
}

/// Quadrature settings of a verification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Size of the neighbourhood of the conoid vertex left out of the layer
    /// integrals, in units of `t`; the result is extrapolated to zero size.
    pub excision_radius: f64,
    /// Power substitutions at singular endpoints of the radial integrals.
    pub boundary_substitution: bool,
    /// A report passes when `|total - target| ≤ pass_tol · ‖φ‖∞`.
    pub pass_tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-7,
            rel_tol: 1e-7,
            max_subdivisions: 2000,
            excision_radius: 1e-4,
            boundary_substitution: true,
            pass_tol: 1e-3,
        }
    }
}

impl QuadConfig {
    pub fn with_pass_tol(mut self, pass_tol: f64) -> Self {
        self.pass_tol = pass_tol;
        self
    }

    fn validate(&self, phi: &BumpTestFunction) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.pass_tol > 0.0) {
            return domain("tolerances must be positive");
        }
        if !(self.excision_radius > 0.0 && self.excision_radius < phi.radius()) {
            return domain("the excision radius must be positive and below the bump radius");
        }
        Ok(())
    }

    pub(crate) fn options(&self, scale: f64) -> QuadOptions {
        QuadOptions::new(self.abs_tol * scale, self.rel_tol).with_max_subdivisions(self.max_subdivisions)
    }
}

/// The kernels that can be certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// Supported in the closed conoid below the source.
    EMinus,
    /// Supported off the conoid (`n = 1`).
    EPlus,
    /// The continuation of `E₋` to the whole plane (`n = 1`), a null solution.
    ETilde,
    /// The `b → 0⁻` limit of `E₋`, relative to the origin.
    FMinus,
    /// The solution supported above `9|x|² + 4y³ = 0`, relative to the origin.
    FPlus,
}

impl KernelKind {
    pub fn name(&self) -> &'static str {
        match self {
            KernelKind::EMinus => "Eminus",
            KernelKind::EPlus => "Eplus",
            KernelKind::ETilde => "Etilde",
            KernelKind::FMinus => "Fminus",
            KernelKind::FPlus => "Fplus",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "eminus" => Some(KernelKind::EMinus),
            "eplus" => Some(KernelKind::EPlus),
            "etilde" | "etildenull" => Some(KernelKind::ETilde),
            "fminus" => Some(KernelKind::FMinus),
            "fplus" => Some(KernelKind::FPlus),
            _ => None,
        }
    }
}

/// Real or imaginary part of a complex-valued kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValuePart {
    Real,
    Imag,
}

/// A kernel together with the part of its values under test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyCase {
    pub kind: KernelKind,
    pub spec: KernelSpec,
    pub part: ValuePart,
}

impl VerifyCase {
    pub fn new(kind: KernelKind, n: usize, b: f64, branch: Branch) -> Result<Self> {
        let spec = KernelSpec::new(n, SourcePoint::new(b)?, branch)?;
        if matches!(kind, KernelKind::EPlus | KernelKind::ETilde) && n != 1 {
            return domain(format!("{} is implemented for n = 1 only", kind.name()));
        }
        Ok(VerifyCase { kind, spec, part: ValuePart::Real })
    }

    pub fn imaginary(mut self) -> Self {
        self.part = ValuePart::Imag;
        self
    }

    /// The point carrying the delta, `(0, b)` or the origin.
    pub fn pole(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.spec.n + 1];
        if matches!(self.kind, KernelKind::EMinus | KernelKind::EPlus) {
            p[self.spec.n] = self.spec.source.b();
        }
        p
    }

    /// `⟨𝒯E, φ⟩` predicted by the fundamental-solution property.
    pub fn target(&self, phi: &BumpTestFunction) -> f64 {
        match (self.kind, self.part) {
            (KernelKind::ETilde, _) | (_, ValuePart::Imag) => 0.0,
            _ => phi.eval(&self.pole()),
        }
    }

    pub fn label(&self) -> String {
        let part = match self.part {
            ValuePart::Real => "",
            ValuePart::Imag => ".im",
        };
        let branch = match (self.kind, self.spec.branch) {
            (KernelKind::EPlus | KernelKind::ETilde, Branch::UpperCut) => "[upper]",
            (KernelKind::EPlus | KernelKind::ETilde, Branch::LowerCut) => "[lower]",
            _ => "",
        };
        format!("{}{}{} n={}", self.kind.name(), branch, part, self.spec.n)
    }
}

/// Outcome of one weak-form check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub label: String,
    pub target: f64,
    pub volume: f64,
    pub layers: Vec<f64>,
    pub total: f64,
    pub residual: f64,
    pub bound: f64,
    pub error_estimate: f64,
    pub nodes: usize,
    pub wall_time: f64,
    pub passed: bool,
    pub note: Option<String>,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case={}", self.label)?;
        writeln!(f, "target={:.17e}", self.target)?;
        writeln!(f, "volume={:.17e}", self.volume)?;
        for (j, l) in self.layers.iter().enumerate() {
            writeln!(f, "layer{j}={l:.17e}")?;
        }
        writeln!(f, "total={:.17e}", self.total)?;
        writeln!(f, "residual={:.3e}", self.residual)?;
        writeln!(f, "bound={:.3e}", self.bound)?;
        writeln!(f, "quad_error={:.3e}", self.error_estimate)?;
        writeln!(f, "nodes={}", self.nodes)?;
        writeln!(f, "wall_time_s={:.3}", self.wall_time)?;
        if let Some(note) = &self.note {
            writeln!(f, "note={note}")?;
        }
        write!(f, "status={}", if self.passed { "PASS" } else { "FAILED" })
    }
}

/// Pairs the kernel of `case` with `𝒯φ`, adds the surface layers for odd
/// `n`, and compares the sum with [`VerifyCase::target`].
pub fn weak_form_residual(case: &VerifyCase, phi: &BumpTestFunction, cfg: &QuadConfig) -> Result<VerifyReport> {
    cfg.validate(phi)?;
    if phi.dim() != case.spec.n + 1 {
        return domain("test function dimension must be n + 1");
    }
    let start = Instant::now();
    let scale = phi.sup_norm();
    let target = case.target(phi);
    let vol = volume::volume_term(case, phi, cfg)?;
    let mut layers = Vec::new();
    if case.kind == KernelKind::EMinus && case.spec.m().is_some() {
        let surface = ConeLevelSet::new(case.spec.source, case.spec.n, 1.0)?;
        let image = TricomiImage::folded(phi);
        let opts = LayerOptions {
            excision_fraction: cfg.excision_radius / case.spec.source.t0(),
            quad: cfg.options(scale * 1e-2),
            ..LayerOptions::default()
        };
        let source = case.spec.source;
        let n = case.spec.n;
        for layer in singular_layers(&case.spec)? {
            let coeff = |p: &[f64]| layer.coefficient(&source, p[n]).unwrap_or(0.0);
            layers.push(delta_layer_action(layer.order, &coeff, &surface, &image, &opts)?);
        }
    }
    let total = vol.value + layers.iter().sum::<f64>();
    let residual = (total - target).abs();
    let bound = cfg.pass_tol * scale;
    let note = (!vol.converged).then(|| "volume quadrature hit its subdivision budget".to_string());
    Ok(VerifyReport {
        label: case.label(),
        target,
        volume: vol.value,
        layers,
        total,
        residual,
        bound,
        error_estimate: vol.error,
        nodes: vol.evaluations,
        wall_time: start.elapsed().as_secs_f64(),
        passed: residual <= bound && vol.converged,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_outside_support_vanishes() {
        let phi = BumpTestFunction::new(&[0.0, -1.0], 0.5, 1.0).unwrap();
        assert_eq!(tricomi_apply(&phi, &[2.0, -1.0]), 0.0);
    }

    #[test]
    fn radial_reduction() {
        // for φ = ψ(x1)ψ(x2)ψ(y) the x-Laplacian is a sum of second partials
        let phi = BumpTestFunction::new(&[0.1, -0.2, -1.0], 0.7, 2.0).unwrap();
        let p = [0.3, 0.1, -1.2];
        let h = 1e-4;
        let mut fd = 0.0;
        for i in 0..3 {
            let mut a = p;
            let mut b = p;
            a[i] += h;
            b[i] -= h;
            let d2 = (phi.eval(&a) - 2.0 * phi.eval(&p) + phi.eval(&b)) / (h * h);
            fd += if i < 2 { p[2] * d2 } else { d2 };
        }
        let exact = tricomi_apply(&phi, &p);
        assert!((fd - exact).abs() < 1e-5 * exact.abs().max(1.0), "{fd} vs {exact}");
    }

    #[test]
    fn disjoint_support_gives_zero() {
        let case = VerifyCase::new(KernelKind::EMinus, 1, -1.0, Branch::LowerCut).unwrap();
        let phi = BumpTestFunction::new(&[3.0, -0.3], 0.2, 1.0).unwrap();
        let rep = weak_form_residual(&case, &phi, &QuadConfig::default()).unwrap();
        assert_eq!(rep.volume, 0.0);
        assert_eq!(rep.target, 0.0);
        assert!(rep.passed);
    }

    #[test]
    fn folded_sphere_means_match() {
        use crate::quad::sphere_integral;
        let phi = BumpTestFunction::new(&[0.0, 0.2, 0.0, -1.0], 0.5, 1.0).unwrap();
        let image = TricomiImage::folded(&phi);
        let (full, folded) = (phi.support(), image.support());
        assert_eq!(folded.lo[..3], [0.0, full.lo[1], 0.0]);
        let opts = QuadOptions::new(1e-13, 1e-11);
        for (r, y) in [(0.3, -1.1), (0.45, -0.8)] {
            let mut f = |x: &[f64]| tricomi_apply(&phi, &[x[0], x[1], x[2], y]);
            let whole = sphere_integral(r, &full.lo[..3], &full.hi[..3], &mut f, &opts);
            let mut g = |x: &[f64]| image.eval(&[x[0], x[1], x[2], y]);
            let part = sphere_integral(r, &folded.lo[..3], &folded.hi[..3], &mut g, &opts);
            assert!((whole - part).abs() < 1e-9 * whole.abs().max(1.0), "{whole} vs {part}");
        }
    }
}
