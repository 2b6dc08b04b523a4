//! The homogeneous distributions `χ_q(s) = s₊^q / Γ(q+1)`, their pullbacks
//! `χ_q(k(x, t - t0))` by the cone function, and surface delta layers.

mod bump;
mod layer;

use crate::error::{domain, Error, Result};
use crate::quad::{
    box_radial_range, integrate, integrate_left_weighted, integrate_right_weighted,
    sphere_integral, QuadOptions,
};
use crate::specfun::{gamma, rgamma};

pub use bump::{
    kernel_derivative, BumpTestFunction, FnTestFunction, Smooth1d, SupportBox, TestFunction,
    TimesArgument, MAX_DERIVATIVE_ORDER,
};
pub use layer::{delta_layer_action, Affine1d, ConeLevelSet, LayerOptions, LevelSet, Scaled};

/// `χ_q(s)` for `q > -1`, where it is a locally integrable function.
pub fn chi_pointwise(q: f64, s: f64) -> Result<f64> {
    if !(q > -1.0) {
        return domain(format!("χ_q is not a function for q = {q} <= -1"));
    }
    if s <= 0.0 {
        return Ok(0.0);
    }
    if q == 0.0 {
        return Ok(1.0);
    }
    Ok(s.powf(q) / gamma(q + 1.0)?)
}

/// Integration-by-parts depth used by [`chi_action_1d`]: the smallest `k`
/// with `q + k > 0`, and never below the prescribed `max(0, ⌈-q⌉ + 1)`.
pub fn default_depth(q: f64) -> usize {
    ((-q).ceil() + 1.0).max(0.0) as usize
}

fn opts_1d() -> QuadOptions {
    QuadOptions::new(1e-15, 1e-13).with_max_subdivisions(4000)
}

/// `(-1)^k / Γ(q+k+1) ∫_0^∞ s^{q+k} φ^{(k)}(s) ds`, equal to `⟨χ_q, φ⟩`
/// whenever `q + k > -1`.
pub fn chi_action_1d_depth<T: Smooth1d + ?Sized>(q: f64, phi: &T, k: usize) -> Result<f64> {
    let p = q + k as f64;
    if !(p > -1.0) {
        return domain(format!("depth {k} too small for q = {q}"));
    }
    if k > MAX_DERIVATIVE_ORDER {
        return domain(format!("depth {k} exceeds the derivative table"));
    }
    let (lo, hi) = phi.support_interval();
    if hi <= 0.0 {
        return Ok(0.0);
    }
    let opts = opts_1d();
    let r = if lo < 0.0 {
        integrate_left_weighted(|s: f64| phi.derivative(k, s), 0.0, hi, p, &opts)
    } else {
        integrate(|s: f64| s.powf(p) * phi.derivative(k, s), lo, hi, &opts)
    };
    // deep integration by parts cancels heavily; the k-consistency check in
    // chi_action_1d is the accuracy gate, this only rejects gross failures
    let magnitude = sup_derivative(phi, k, lo, hi) * hi.powf(p) * (hi - lo.max(0.0));
    let tolerance = 1e-8 * r.value.abs().max(magnitude);
    if !r.converged && r.error > tolerance {
        return Err(Error::Quadrature { estimate: r.error, tolerance });
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * r.value * rgamma(p + 1.0))
}

/// `⟨χ_q, φ⟩` for any real `q`, by integrating by parts to depth
/// `max(0, ⌈-q⌉ + 1)`.  The value is cross-checked against depth `k + 1`.
pub fn chi_action_1d<T: Smooth1d + ?Sized>(q: f64, phi: &T) -> Result<f64> {
    let k = default_depth(q);
    let v = chi_action_1d_depth(q, phi, k)?;
    let w = chi_action_1d_depth(q, phi, k + 1)?;
    let (lo, hi) = phi.support_interval();
    let scale = (hi - lo) * (0..=k + 1).map(|j| sup_derivative(phi, j, lo, hi)).fold(0.0, f64::max);
    if (v - w).abs() > 1e-8 * scale.max(v.abs()) {
        return Err(Error::Quadrature { estimate: (v - w).abs(), tolerance: 1e-8 * scale });
    }
    Ok(v)
}

fn sup_derivative<T: Smooth1d + ?Sized>(phi: &T, k: usize, lo: f64, hi: f64) -> f64 {
    (0..=64)
        .map(|i| phi.derivative(k, lo + (hi - lo) * i as f64 / 64.0).abs())
        .fold(0.0, f64::max)
}

/// `|⟨χ_{q-1}, sφ⟩ - q⟨χ_q, φ⟩|`, which vanishes by Euler's relation
/// `s χ_{q-1}(s) = q χ_q(s)`.
pub fn euler_identity_residual<T: Smooth1d + ?Sized>(q: f64, phi: &T) -> Result<f64> {
    let lhs = chi_action_1d(q - 1.0, &TimesArgument(phi))?;
    let rhs = q * chi_action_1d(q, phi)?;
    Ok((lhs - rhs).abs())
}

/// `∫ χ_q(k(x, t - t0)) f(x, t) dx dt` over `R^{n+1}` for `q > -1`, where
/// `f` is supported in `support` (coordinates `x_1, …, x_n, t`).
///
/// Cone coordinates `t = t0 + τ`, `|x| = τσ` turn `χ_q(k)` into
/// `τ^{2q}(1 - σ²)^q / Γ(q+1)`; the endpoint powers at `σ = 1` and at the
/// vertex `τ = 0` are absorbed by power substitutions.
pub fn chi_of_k_pairing(
    q: f64,
    n: usize,
    t0: f64,
    support: &SupportBox,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
) -> Result<f64> {
    if !(q > -1.0) {
        return domain(format!("χ_q(k) is locally integrable only for q > -1, got {q}"));
    }
    if support.dim() != n + 1 {
        return domain("support dimension must be n + 1");
    }
    let scale = sample_scale(support, f);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let x_lo = &support.lo[..n];
    let x_hi = &support.hi[..n];
    let (near, far) = box_radial_range(x_lo, x_hi);
    let tau_lo = (support.lo[n] - t0).max(0.0);
    let tau_hi = support.hi[n] - t0;
    if tau_hi <= tau_lo {
        return Ok(0.0);
    }
    let sphere_opts = QuadOptions::new(1e-14 * scale, 1e-11);
    let sigma_opts = QuadOptions::new(1e-14 * scale, 1e-10).with_max_subdivisions(1000);
    let tau_opts = QuadOptions::new(1e-13 * scale, 1e-9).with_max_subdivisions(1000);

    let slice = |tau: f64| -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        let t = t0 + tau;
        let s_lo = near / tau;
        if s_lo >= 1.0 {
            return 0.0;
        }
        let s_hi = (far / tau).min(1.0);
        let mean = |sigma: f64| -> f64 {
            let r = tau * sigma;
            let mut g = |x: &[f64]| {
                let mut p = Vec::with_capacity(n + 1);
                p.extend_from_slice(x);
                p.push(t);
                f(&p)
            };
            sphere_integral(r, x_lo, x_hi, &mut g, &sphere_opts)
        };
        let radial = |sigma: f64| sigma.powi(n as i32 - 1) * (1.0 + sigma).powf(q) * mean(sigma);
        if s_hi >= 1.0 {
            integrate_right_weighted(radial, s_lo, 1.0, q, &sigma_opts).value
        } else {
            integrate(|s: f64| radial(s) * (1.0 - s).powf(q), s_lo, s_hi, &sigma_opts).value
        }
    };
    let power = n as f64 + 2.0 * q;
    let r = if tau_lo == 0.0 {
        integrate_left_weighted(slice, 0.0, tau_hi, power, &tau_opts)
    } else {
        integrate(|tau: f64| tau.powf(power) * slice(tau), tau_lo, tau_hi, &tau_opts)
    };
    Ok(r.value * rgamma(q + 1.0))
}

/// Crude magnitude of `f` over the box, used to scale absolute tolerances.
fn sample_scale(support: &SupportBox, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> f64 {
    let d = support.dim();
    let m = 9usize;
    let total = m.pow(d as u32);
    let mut best: f64 = 0.0;
    let mut p = vec![0.0; d];
    for idx in 0..total {
        let mut rem = idx;
        for i in 0..d {
            let j = rem % m;
            rem /= m;
            let frac = (j as f64 + 0.5) / m as f64;
            p[i] = support.lo[i] + (support.hi[i] - support.lo[i]) * frac;
        }
        best = best.max(f(&p).abs());
    }
    let volume: f64 = support.lo.iter().zip(&support.hi).map(|(l, h)| h - l).product();
    best * volume.max(1e-300)
}

/// `⟨χ_q(k(·)), φ⟩` on `R^{n+1}` for `q > -1`.
pub fn chi_of_k_action<T: TestFunction + ?Sized>(q: f64, n: usize, t0: f64, phi: &T) -> Result<f64> {
    chi_of_k_pairing(q, n, t0, &phi.support(), &|p| phi.eval(p))
}

/// Relative residuals of the two identities
/// `□ χ_{j+1/2-n/2}(k) = 4j χ_{j-1/2-n/2}(k)` and
/// `∂_t χ_{j+1/2-n/2}(k) = 2(t - t0) χ_{j-1/2-n/2}(k)`, both tested against
/// `φ` (with `□ = ∂_t² - Δ_x`).
pub fn epd_box_identity_residual(
    j: usize,
    n: usize,
    t0: f64,
    phi: &BumpTestFunction,
) -> Result<(f64, f64)> {
    let hi_order = j as f64 + 0.5 - n as f64 / 2.0;
    let lo_order = hi_order - 1.0;
    if !(lo_order > -1.0) {
        return domain(format!("j = {j} too small for n = {n}: order {lo_order} <= -1"));
    }
    if phi.dim() != n + 1 {
        return domain("test function must live on R^{n+1}");
    }
    let support = phi.support();
    let wave = |p: &[f64]| {
        let mut v = phi.second_partial(p, n);
        for i in 0..n {
            v -= phi.second_partial(p, i);
        }
        v
    };
    let box_lhs = chi_of_k_pairing(hi_order, n, t0, &support, &wave)?;
    let box_rhs = 4.0 * j as f64 * chi_of_k_pairing(lo_order, n, t0, &support, &|p| phi.eval(p))?;
    let dt = |p: &[f64]| -phi.first_partial(p, n);
    let time_lhs = chi_of_k_pairing(hi_order, n, t0, &support, &dt)?;
    let weighted = |p: &[f64]| 2.0 * (p[n] - t0) * phi.eval(p);
    let time_rhs = chi_of_k_pairing(lo_order, n, t0, &support, &weighted)?;
    Ok((relative(box_lhs, box_rhs), relative(time_lhs, time_rhs)))
}

fn relative(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn bump1(c: f64, r: f64) -> BumpTestFunction {
        BumpTestFunction::new(&[c], r, 1.0).unwrap()
    }

    #[test]
    fn pointwise_values() {
        assert_eq!(chi_pointwise(0.0, 2.5).unwrap(), 1.0);
        assert!((chi_pointwise(1.0, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((chi_pointwise(-0.5, 1.0).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert_eq!(chi_pointwise(0.3, -1.0).unwrap(), 0.0);
        assert!(chi_pointwise(-1.0, 1.0).is_err());
    }

    #[test]
    fn delta_collapse() {
        let phi = bump1(0.1, 0.5);
        let d = |k: usize| Smooth1d::derivative(&phi, k, 0.0);
        assert!((chi_action_1d(-1.0, &phi).unwrap() - d(0)).abs() < 1e-12);
        assert!((chi_action_1d(-2.0, &phi).unwrap() + d(1)).abs() < 1e-11);
        assert!((chi_action_1d(-3.0, &phi).unwrap() - d(2)).abs() < 1e-10);
    }

    #[test]
    fn heaviside_pairing() {
        let phi = bump1(0.2, 0.5);
        let direct = integrate(|s: f64| Smooth1d::derivative(&phi, 0, s), 0.0, 0.7, &opts_1d()).value;
        assert!((chi_action_1d(0.0, &phi).unwrap() - direct).abs() < 1e-13);
    }

    #[test]
    fn euler_relation() {
        let phi = bump1(0.3, 0.6);
        for q in [1.0, 0.5, -0.4, -1.5, 2.2] {
            assert!(euler_identity_residual(q, &phi).unwrap() < 1e-11, "q={q}");
        }
        // φ vanishing at the origin
        let psi = bump1(1.0, 0.5);
        assert!(euler_identity_residual(0.0, &psi).unwrap() < 1e-12);
    }

    #[test]
    fn cone_pairing_outside_support_is_zero() {
        let phi = BumpTestFunction::new(&[3.0, 1.5], 0.4, 1.0).unwrap();
        assert_eq!(chi_of_k_action(0.0, 1, 1.0, &phi).unwrap(), 0.0);
    }

    #[test]
    fn cone_pairing_heaviside_against_cartesian() {
        // q = 0: plain integral of φ over the cone, by Cartesian nesting
        let phi = BumpTestFunction::new(&[0.3, 1.6], 0.5, 1.0).unwrap();
        let v = chi_of_k_action(0.0, 1, 1.0, &phi).unwrap();
        let o = QuadOptions::new(1e-14, 1e-12);
        let direct = integrate(
            |t: f64| {
                let tau = t - 1.0;
                if tau <= 0.0 {
                    return 0.0;
                }
                integrate(|x: f64| phi.eval(&[x, t]), -tau, tau, &o).value
            },
            1.1,
            2.1,
            &o,
        )
        .value;
        assert!((v - direct).abs() < 1e-10, "{v} vs {direct}");
    }
}
