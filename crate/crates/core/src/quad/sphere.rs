//! Integration over spheres `|x| = r` in `R^n` restricted to an
//! axis-aligned box, in hyperspherical coordinates.

use std::f64::consts::PI;

use super::{integrate_with_breaks, QuadOptions, QuadValue};
use crate::specfun::gamma;

/// Area of the unit sphere `S^{n-1}` in `R^n`.
pub fn unit_sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h).expect("n >= 1")
}

/// Smallest and largest distance from the origin to points of the box.
pub fn box_radial_range(lo: &[f64], hi: &[f64]) -> (f64, f64) {
    let mut near = 0.0;
    let mut far = 0.0;
    for (&l, &h) in lo.iter().zip(hi) {
        let d = if l > 0.0 {
            l
        } else if h < 0.0 {
            -h
        } else {
            0.0
        };
        near += d * d;
        let m = l.abs().max(h.abs());
        far += m * m;
    }
    (near.sqrt(), far.sqrt())
}

fn inside(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo && x <= hi
}

/// Integrates `f` over `{x : |x| = r} ∩ [lo, hi]` against the angular
/// measure of the unit sphere, i.e. `∫_{S^{n-1}} f(rω) 1_box(rω) dω`.
/// The dimension is `lo.len()`.
pub fn sphere_integral<T: QuadValue>(
    r: f64,
    lo: &[f64],
    hi: &[f64],
    f: &mut dyn FnMut(&[f64]) -> T,
    opts: &QuadOptions,
) -> T {
    let n = lo.len();
    if r == 0.0 {
        let origin = vec![0.0; n];
        if lo.iter().zip(hi).all(|(&l, &h)| inside(0.0, l, h)) {
            return f(&origin) * unit_sphere_area(n);
        }
        return T::default();
    }
    let (near, far) = box_radial_range(lo, hi);
    if r < near || r > far {
        return T::default();
    }
    match n {
        1 => {
            let mut acc = T::default();
            for x in [r, -r] {
                if inside(x, lo[0], hi[0]) {
                    acc = acc + f(&[x]);
                }
            }
            acc
        }
        2 => circle(r, lo, hi, f, opts),
        _ => {
            let mut acc = T::default();
            for (t0, t1) in polar_ranges(r, lo, hi) {
                let dim = n;
                let mut g = |theta: f64| {
                    let (s, c) = theta.sin_cos();
                    let head = r * c;
                    let mut inner = |q: &[f64]| {
                        let mut p = Vec::with_capacity(dim);
                        p.push(head);
                        p.extend_from_slice(q);
                        f(&p)
                    };
                    sphere_integral(r * s, &lo[1..], &hi[1..], &mut inner, opts) * s.powi(dim as i32 - 2)
                };
                acc = acc + integrate_with_breaks(&mut g, &[t0, t1], opts).value;
            }
            acc
        }
    }
}

/// Polar-angle intervals on which the sphere meets the box, using the
/// first coordinate `r cos θ` and the distance range of the remaining box.
fn polar_ranges(r: f64, lo: &[f64], hi: &[f64]) -> Vec<(f64, f64)> {
    let ta = (hi[0] / r).clamp(-1.0, 1.0).acos();
    let tb = (lo[0] / r).clamp(-1.0, 1.0).acos();
    let (near, far) = box_radial_range(&lo[1..], &hi[1..]);
    if near > r {
        return Vec::new();
    }
    let s0 = (near / r).asin();
    let s1 = (far / r).min(1.0).asin();
    let mut out = Vec::new();
    for (u0, u1) in [(s0, s1), (PI - s1, PI - s0)] {
        let lo_t = u0.max(ta);
        let hi_t = u1.min(tb);
        if hi_t > lo_t {
            out.push((lo_t, hi_t));
        }
    }
    // the two windows coincide when s1 reaches π/2
    if out.len() == 2 && out[0].1 >= out[1].0 {
        let merged = (out[0].0, out[1].1);
        out = vec![merged];
    }
    out
}

fn circle<T: QuadValue>(
    r: f64,
    lo: &[f64],
    hi: &[f64],
    f: &mut dyn FnMut(&[f64]) -> T,
    opts: &QuadOptions,
) -> T {
    let two_pi = 2.0 * PI;
    let mut cuts = vec![0.0, two_pi];
    let norm = |t: f64| t.rem_euclid(two_pi);
    for c in [lo[0], hi[0]] {
        if c.abs() <= r {
            let t = (c / r).acos();
            cuts.push(norm(t));
            cuts.push(norm(-t));
        }
    }
    for c in [lo[1], hi[1]] {
        if c.abs() <= r {
            let t = (c / r).asin();
            cuts.push(norm(t));
            cuts.push(norm(PI - t));
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut arcs: Vec<(f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let (s, c) = mid.sin_cos();
        if inside(r * c, lo[0], hi[0]) && inside(r * s, lo[1], hi[1]) {
            match arcs.last_mut() {
                Some(last) if last.1 == w[0] => last.1 = w[1],
                _ => arcs.push((w[0], w[1])),
            }
        }
    }
    let mut acc = T::default();
    for (t0, t1) in arcs {
        let mut g = |t: f64| {
            let (s, c) = t.sin_cos();
            f(&[r * c, r * s])
        };
        acc = acc + integrate_with_breaks(&mut g, &[t0, t1], opts).value;
    }
    acc
}
