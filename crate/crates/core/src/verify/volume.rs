use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::chi::{BumpTestFunction, TestFunction};
use crate::error::{domain, Result};
use crate::fundsol::{e_minus_radial, e_plus_radial, f_minus_radial, f_plus_radial, tilde_e_radial, Parity};
use crate::geometry::limit_boundary_radius;
use crate::quad::{box_radial_range, integrate, integrate_with_breaks, sphere_integral, QuadOptions, QuadResult};

use super::{tricomi_apply, KernelKind, QuadConfig, ValuePart, VerifyCase};

/// Chunks per smooth stretch of the outer `y` integral, integrated in parallel.
const Y_CHUNKS: usize = 8;

/// A radial interval on which the kernel is smooth, with optional power-law
/// endpoint singularities `(r - lo)^p`, `(hi - r)^p`.
#[derive(Debug, Clone)]
struct Piece {
    lo: f64,
    hi: f64,
    left: Option<f64>,
    right: Option<f64>,
    breaks: Vec<f64>,
}

impl Piece {
    fn plain(lo: f64, hi: f64, breaks: Vec<f64>) -> Self {
        Piece { lo, hi, left: None, right: None, breaks }
    }

    fn clip(mut self, near: f64, far: f64) -> Option<Self> {
        if self.lo < near {
            self.lo = near;
            self.left = None;
        }
        if self.hi > far {
            self.hi = far;
            self.right = None;
        }
        let (lo, hi) = (self.lo, self.hi);
        self.breaks.retain(|&b| b > lo && b < hi);
        (self.hi > self.lo).then_some(self)
    }
}

fn t_of(y: f64) -> f64 {
    2.0 * (-y).max(0.0).powf(1.5) / 3.0
}

fn pieces(case: &VerifyCase, y: f64) -> Vec<Piece> {
    let n = case.spec.n as f64;
    let b = case.spec.source.b();
    let a = case.spec.source.a();
    let inf = f64::INFINITY;
    let limit_exp = 1.0 / 3.0 - n / 2.0;
    match case.kind {
        KernelKind::EMinus => {
            if y >= b {
                return Vec::new();
            }
            let rho = t_of(y) - a;
            let right = (case.spec.parity == Parity::Even).then_some(0.5 - n / 2.0);
            vec![Piece { lo: 0.0, hi: rho, left: None, right, breaks: Vec::new() }]
        }
        KernelKind::ETilde => {
            let sing = if y <= 0.0 { t_of(y) + a } else { a };
            vec![Piece::plain(0.0, inf, vec![sing])]
        }
        KernelKind::EPlus => {
            let sing = if y <= 0.0 { t_of(y) + a } else { a };
            let lo = if y < b { t_of(y) - a } else { 0.0 };
            vec![Piece::plain(lo, inf, vec![sing])]
        }
        KernelKind::FMinus => {
            if y >= 0.0 {
                return Vec::new();
            }
            vec![Piece { lo: 0.0, hi: limit_boundary_radius(y), left: None, right: Some(limit_exp), breaks: Vec::new() }]
        }
        KernelKind::FPlus => {
            if y < 0.0 {
                vec![Piece { lo: limit_boundary_radius(y), hi: inf, left: Some(limit_exp), right: None, breaks: Vec::new() }]
            } else {
                let knee = 2.0 * y.powf(1.5) / 3.0;
                vec![Piece::plain(0.0, inf, vec![knee, 4.0 * knee])]
            }
        }
    }
}

fn density(case: &VerifyCase, r: f64, y: f64) -> Result<f64> {
    let pick = |z: num_complex::Complex64| match case.part {
        ValuePart::Real => z.re,
        ValuePart::Imag => z.im,
    };
    let src = &case.spec.source;
    let v = match case.kind {
        KernelKind::EMinus => {
            let v = e_minus_radial(&case.spec, r, y)?;
            match case.part {
                ValuePart::Real => v,
                ValuePart::Imag => 0.0,
            }
        }
        KernelKind::EPlus => pick(e_plus_radial(r, y, src, case.spec.branch)?.value),
        KernelKind::ETilde => pick(tilde_e_radial(r, y, src, case.spec.branch)?.value),
        KernelKind::FMinus | KernelKind::FPlus => {
            let f = if case.kind == KernelKind::FMinus { f_minus_radial } else { f_plus_radial };
            let v = f(case.spec.n, r, y)?;
            match case.part {
                ValuePart::Real => v,
                ValuePart::Imag => 0.0,
            }
        }
    };
    Ok(if v.is_finite() { v } else { 0.0 })
}

/// `∫_lo^hi g`, with `g` singular like `(hi - r)^q` (`right`) or `(r - lo)^q`
/// (`left`), through `r = hi - w^γ` or `lo + w^γ`, `γ = 1/(q + 1)`.
fn integrate_piece(g: &mut dyn FnMut(f64) -> f64, piece: &Piece, substitute: bool, opts: &QuadOptions) -> QuadResult<f64> {
    let (lo, hi) = (piece.lo, piece.hi);
    let endpoint = match (piece.left, piece.right) {
        (_, Some(q)) if substitute => Some((q, hi, -1.0)),
        (Some(q), _) if substitute => Some((q, lo, 1.0)),
        _ => None,
    };
    match endpoint {
        Some((q, origin, dir)) => {
            let gamma = 1.0 / (q + 1.0);
            let top = (hi - lo).powf(q + 1.0);
            integrate(|w: f64| g(origin + dir * w.powf(gamma)) * gamma * w.powf(gamma - 1.0), 0.0, top, opts)
        }
        None => {
            let mut br = vec![lo];
            br.extend_from_slice(&piece.breaks);
            br.push(hi);
            integrate_with_breaks(g, &br, opts)
        }
    }
}

pub(super) struct VolumeValue {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

fn y_breaks(case: &VerifyCase, lo: f64, hi: f64) -> Vec<f64> {
    let mut br = vec![lo];
    let mut inner = vec![0.0];
    if matches!(case.kind, KernelKind::EMinus | KernelKind::EPlus | KernelKind::ETilde) {
        inner.push(case.spec.source.b());
    }
    inner.sort_by(f64::total_cmp);
    for b in inner {
        if b > lo && b < hi {
            br.push(b);
        }
    }
    br.push(hi);
    br
}

/// The `x` part of the support of `φ`, halved in every coordinate where the
/// bump is centred at zero, and the factor that undoes the halving.  `E` is
/// radial and `𝒯φ` is even in such a coordinate.
pub(super) fn folded_box(phi: &BumpTestFunction, n: usize) -> (Vec<f64>, Vec<f64>, f64) {
    let support = phi.support();
    let mut lo = support.lo[..n].to_vec();
    let hi = support.hi[..n].to_vec();
    let mut fold = 1.0;
    for (l, &c) in lo.iter_mut().zip(&phi.center()[..n]) {
        if c == 0.0 {
            *l = 0.0;
            fold *= 2.0;
        }
    }
    (lo, hi, fold)
}

/// `∫ E 𝒯φ` over the support of `φ`: radial in `x` around the axis, sphere
/// integrals of `𝒯φ` per radius, adaptive in `y` over parallel chunks.
pub(super) fn volume_term(case: &VerifyCase, phi: &BumpTestFunction, cfg: &QuadConfig) -> Result<VolumeValue> {
    let n = case.spec.n;
    if case.kind == KernelKind::EMinus && case.spec.parity == Parity::Even && n > 2 {
        return domain(format!("the n = {n} density is not locally integrable; only n = 2 is supported"));
    }
    if matches!(case.kind, KernelKind::FMinus | KernelKind::FPlus) && 1.0 / 3.0 - n as f64 / 2.0 <= -1.0 {
        return domain(format!("the limiting density for n = {n} is not locally integrable"));
    }
    let support = phi.support();
    let (x_lo, x_hi, fold) = folded_box(phi, n);
    let (x_lo, x_hi) = (&x_lo[..], &x_hi[..]);
    let (near, far) = box_radial_range(x_lo, x_hi);
    let scale = phi.sup_norm();
    let outer = cfg.options(scale);
    let inner = QuadOptions::new(outer.abs_tol * 1e-2, cfg.rel_tol * 1e-2).with_max_subdivisions(cfg.max_subdivisions);
    let sphere = QuadOptions::new(outer.abs_tol * 1e-3, cfg.rel_tol * 1e-3).with_max_subdivisions(cfg.max_subdivisions);
    let evaluations = AtomicUsize::new(0);
    let failed = AtomicBool::new(false);
    let first_error = std::sync::Mutex::new(None);

    let slice = |y: f64| -> f64 {
        let mut total = 0.0;
        for piece in pieces(case, y) {
            let Some(piece) = piece.clip(near, far) else { continue };
            let mut g = |r: f64| -> f64 {
                let e = match density(case, r, y) {
                    Ok(e) => e,
                    Err(err) => {
                        failed.store(true, Ordering::Relaxed);
                        first_error.lock().unwrap().get_or_insert(err.to_string());
                        return 0.0;
                    }
                };
                if e == 0.0 {
                    return 0.0;
                }
                let mut count = 0usize;
                let mut f = |x: &[f64]| {
                    count += 1;
                    let mut p = Vec::with_capacity(n + 1);
                    p.extend_from_slice(x);
                    p.push(y);
                    tricomi_apply(phi, &p)
                };
                let m = sphere_integral(r, x_lo, x_hi, &mut f, &sphere);
                evaluations.fetch_add(count, Ordering::Relaxed);
                r.powi(n as i32 - 1) * e * m
            };
            let res = integrate_piece(&mut g, &piece, cfg.boundary_substitution, &inner);
            if !res.converged {
                failed.store(true, Ordering::Relaxed);
            }
            total += res.value;
        }
        total
    };

    let breaks = y_breaks(case, support.lo[n], support.hi[n]);
    let chunks: Vec<(f64, f64)> = breaks
        .windows(2)
        .flat_map(|w| {
            let h = (w[1] - w[0]) / Y_CHUNKS as f64;
            (0..Y_CHUNKS).map(move |i| (w[0] + i as f64 * h, if i + 1 == Y_CHUNKS { w[1] } else { w[0] + (i + 1) as f64 * h }))
        })
        .collect();
    let chunk_opts = QuadOptions::new(outer.abs_tol / chunks.len() as f64, outer.rel_tol)
        .with_max_subdivisions(outer.max_subdivisions);
    let results: Vec<QuadResult<f64>> = chunks.par_iter().map(|&(a, b)| integrate(slice, a, b, &chunk_opts)).collect();
    let value = fold * results.iter().map(|r| r.value).sum::<f64>();
    let error = fold * results.iter().map(|r| r.error).sum::<f64>();
    let converged = results.iter().all(|r| r.converged) && !failed.load(Ordering::Relaxed);
    if let Some(msg) = first_error.into_inner().unwrap() {
        return Err(crate::error::Error::Singular(msg));
    }
    Ok(VolumeValue { value, error, evaluations: evaluations.into_inner(), converged })
}

/// Integrates `f` over an axis-aligned box by nested adaptive quadrature.
pub fn integrate_over_box(f: &dyn Fn(&[f64]) -> f64, lo: &[f64], hi: &[f64], opts: &QuadOptions) -> f64 {
    fn rec(f: &dyn Fn(&[f64]) -> f64, prefix: &mut Vec<f64>, lo: &[f64], hi: &[f64], opts: &QuadOptions) -> f64 {
        let d = prefix.len();
        if d == lo.len() {
            return f(prefix);
        }
        let inner = QuadOptions::new(opts.abs_tol * 1e-2, opts.rel_tol * 1e-2).with_max_subdivisions(opts.max_subdivisions);
        integrate(
            |s: f64| {
                prefix.push(s);
                let v = rec(f, prefix, lo, hi, if d + 1 == lo.len() { opts } else { &inner });
                prefix.pop();
                v
            },
            lo[d],
            hi[d],
            opts,
        )
        .value
    }
    rec(f, &mut Vec::with_capacity(lo.len()), lo, hi, opts)
}

/// `∫ (φ 𝒯ψ - ψ 𝒯φ)`, which vanishes because `𝒯` is formally self-adjoint.
pub fn green_bilinear_residual(phi: &BumpTestFunction, psi: &BumpTestFunction, opts: &QuadOptions) -> f64 {
    let (sa, sb) = (phi.support(), psi.support());
    let lo: Vec<f64> = sa.lo.iter().zip(&sb.lo).map(|(a, b)| a.max(*b)).collect();
    let hi: Vec<f64> = sa.hi.iter().zip(&sb.hi).map(|(a, b)| a.min(*b)).collect();
    if lo.iter().zip(&hi).any(|(l, h)| l >= h) {
        return 0.0;
    }
    let f = |p: &[f64]| phi.eval(p) * tricomi_apply(psi, p) - psi.eval(p) * tricomi_apply(phi, p);
    integrate_over_box(&f, &lo, &hi, opts)
}
