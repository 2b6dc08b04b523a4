use crate::error::{domain, Result};
use crate::quad::{integrate, QuadOptions};

use super::gamma::rgamma;
use super::hyp2f1::HypTriple;

/// Independent evaluation of ₂F₁ through Euler's integral
/// `Γ(c)/(Γ(b)Γ(c-b)) ∫_0^1 t^{b-1}(1-t)^{c-b-1}(1-zt)^{-a} dt`,
/// valid for `c > b > 0` and real `z < 1`.
pub fn hyp2f1_oracle(p: HypTriple, z: f64) -> Result<f64> {
    let (a, b, c) = (p.a, p.b, p.c);
    if !(c > b && b > 0.0) {
        return domain("Euler's integral requires c > b > 0");
    }
    if z >= 1.0 {
        return domain("Euler's integral oracle requires z < 1");
    }
    let d = c - b;
    let opts = QuadOptions::new(1e-15, 1e-13).with_max_subdivisions(2000);
    let kernel = |t: f64| (1.0 - z * t).powf(-a);
    // t = w^{1/b} on [0, 1/2] and 1 - t = w^{1/d} on [1/2, 1] absorb the endpoint powers.
    let left = integrate(
        |w: f64| {
            let t = w.powf(1.0 / b);
            (1.0 - t).powf(d - 1.0) * kernel(t)
        },
        0.0,
        0.5f64.powf(b),
        &opts,
    );
    let right = integrate(
        |w: f64| {
            let s = w.powf(1.0 / d);
            (1.0 - s).powf(b - 1.0) * kernel(1.0 - s)
        },
        0.0,
        0.5f64.powf(d),
        &opts,
    );
    let tol = 1e-11 * (left.value / b + right.value / d).abs();
    let total = left.require(tol)? / b + right.require(tol)? / d;
    Ok(total * rgamma(b) * rgamma(d) / rgamma(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::hyp2f1_real;

    #[test]
    fn oracle_matches_closed_form() {
        let p = HypTriple::new(1.0, 1.0, 2.0).unwrap();
        for &x in &[-5.0, -0.5, 0.5, 0.9] {
            let v = hyp2f1_oracle(p, x).unwrap();
            assert!((v + (1.0 - x).ln() / x).abs() < 1e-11);
        }
        let p = HypTriple::new(1.0 / 6.0, 1.0 / 6.0, 1.0).unwrap();
        let v = hyp2f1_oracle(p, -3.0).unwrap();
        assert!((v - hyp2f1_real(p, -3.0).unwrap()).abs() < 1e-11);
    }
}
