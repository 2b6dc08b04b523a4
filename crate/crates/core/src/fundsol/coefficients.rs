use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::chi::chi_pointwise;
use crate::error::{domain, Error, Result};
use crate::specfun::{hyp2f1_real, pochhammer, HypTriple};

/// Coefficients `c_0, …, c_J` of the formal series `Σ c_j (t0 t)^{-j} χ_{j+1/2-n/2}(k)`
/// solving the reduced hyperbolic equation, for one value of `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpdCoefficients {
    pub alpha: f64,
    pub values: Vec<f64>,
}

/// `c_j = (-1/4)^j (α)_j (1-α)_j / j!`.
pub fn epd_coefficient(alpha: f64, j: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..j {
        let fi = i as f64;
        c *= -0.25 * (alpha + fi) * (1.0 - alpha + fi) / (fi + 1.0);
    }
    c
}

pub fn epd_coefficients(alpha: f64, last: usize) -> EpdCoefficients {
    let mut values = Vec::with_capacity(last + 1);
    let mut c = 1.0;
    values.push(c);
    for i in 0..last {
        let fi = i as f64;
        c *= -0.25 * (alpha + fi) * (1.0 - alpha + fi) / (fi + 1.0);
        values.push(c);
    }
    EpdCoefficients { alpha, values }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact closed form `(-1/4)^j (α)_j (1-α)_j / j!` for rational `α`.
pub fn epd_coefficients_exact(alpha: &BigRational, last: usize) -> Vec<BigRational> {
    let one = BigRational::one();
    let mut out = Vec::with_capacity(last + 1);
    for j in 0..=last {
        let mut num = one.clone();
        let mut den = one.clone();
        for i in 0..j {
            let fi = rat(i as i64);
            num *= (alpha + &fi) * (&one - alpha + &fi);
            den *= rat(-4) * (&fi + &one);
        }
        out.push(num / den);
    }
    out
}

/// Coefficients generated by `c_0 = 1`, `(1/2)(j-1+α)(j-α) c_{j-1} + 2j c_j = 0`.
pub fn epd_recurrence_exact(alpha: &BigRational, last: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    for j in 1..=last {
        let fj = rat(j as i64);
        let factor = (&fj - rat(1) + alpha) * (&fj - alpha) / rat(2);
        let c = -(factor * &out[j - 1]) / (rat(2) * fj);
        out.push(c);
    }
    out
}

/// Residuals `(1/2)(j-1+α)(j-α) c_{j-1} + 2j c_j` for `j ≥ 1`.
pub fn epd_recurrence_residuals(alpha: &BigRational, coeffs: &[BigRational]) -> Vec<BigRational> {
    (1..coeffs.len())
        .map(|j| {
            let fj = rat(j as i64);
            (&fj - rat(1) + alpha) * (&fj - alpha) / rat(2) * &coeffs[j - 1] + rat(2) * fj * &coeffs[j]
        })
        .collect()
}

/// `(5/6)_j (1/6)_j / j!`, the weights of the surface layers for odd `n`.
pub fn layer_coefficient(j: usize) -> f64 {
    pochhammer(5.0 / 6.0, j) * pochhammer(1.0 / 6.0, j) / pochhammer(1.0, j)
}

pub fn layer_coefficient_exact(j: usize) -> BigRational {
    let five_sixths = BigRational::new(BigInt::from(5), BigInt::from(6));
    let sixth = BigRational::new(BigInt::from(1), BigInt::from(6));
    let mut c = BigRational::one();
    for i in 0..j {
        let fi = rat(i as i64);
        c *= (&five_sixths + &fi) * (&sixth + &fi) / (&fi + rat(1));
    }
    c
}

fn check_ratio(k: f64, t: f64, t0: f64) -> Result<f64> {
    let ratio = k / (4.0 * t0 * t);
    if ratio.abs() >= 1.0 {
        return Err(Error::Divergent { ratio: ratio.abs() });
    }
    Ok(ratio)
}

/// Partial sum `Σ_{j≤J} c_j(α) (t0 t)^{-j} χ_{j+1/2-n/2}(k)` at `|x| = r`.
/// Defined pointwise only when every order exceeds `-1`, i.e. `n ≤ 2`.
pub fn phi_series_partial(alpha: f64, n: usize, r: f64, t: f64, t0: f64, last: usize) -> Result<f64> {
    if n == 0 || n > 2 {
        return domain(format!("pointwise series needs n in {{1, 2}}, got {n}"));
    }
    let tau = t - t0;
    if !(tau > r) {
        return Ok(0.0);
    }
    let k = tau * tau - r * r;
    check_ratio(k, t, t0)?;
    let base = 0.5 - n as f64 / 2.0;
    let coeffs = epd_coefficients(alpha, last);
    let mut sum = 0.0;
    for (j, c) in coeffs.values.iter().enumerate() {
        sum += c * (t0 * t).powi(-(j as i32)) * chi_pointwise(base + j as f64, k)?;
    }
    Ok(sum)
}

/// Closed forms of the series: `χ_0(k) F(α, 1-α; 1; -k/(4 t0 t))` for
/// `n = 1` and `χ_{-1/2}(k) F(α, 1-α; 1/2; -k/(4 t0 t))` for `n = 2`.
pub fn phi_closed_form(alpha: f64, n: usize, r: f64, t: f64, t0: f64) -> Result<f64> {
    if n == 0 || n > 2 {
        return domain(format!("pointwise closed form needs n in {{1, 2}}, got {n}"));
    }
    let tau = t - t0;
    if !(tau > r) {
        return Ok(0.0);
    }
    let k = tau * tau - r * r;
    let ratio = check_ratio(k, t, t0)?;
    let c = 1.5 - n as f64 / 2.0;
    let f = hyp2f1_real(HypTriple::new(alpha, 1.0 - alpha, c)?, -ratio)?;
    Ok(chi_pointwise(0.5 - n as f64 / 2.0, k)? * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn first_coefficients() {
        let c = epd_coefficients_exact(&q(1, 6), 2);
        assert_eq!(c[0], q(1, 1));
        assert_eq!(c[1], q(-5, 144));
        assert_eq!(c[2], q(385, 41472));
        assert!((epd_coefficient(1.0 / 6.0, 2) - 385.0 / 41472.0).abs() < 1e-17);
        assert_eq!(layer_coefficient_exact(1), q(5, 36));
        assert!((layer_coefficient(1) - 5.0 / 36.0).abs() < 1e-16);
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for alpha in [q(1, 6), q(1, 3), q(9, 10)] {
            let closed = epd_coefficients_exact(&alpha, 20);
            let rec = epd_recurrence_exact(&alpha, 20);
            assert_eq!(closed, rec);
            assert!(epd_recurrence_residuals(&alpha, &closed).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn series_outside_cone_vanishes() {
        assert_eq!(phi_series_partial(1.0 / 6.0, 1, 2.0, 1.5, 1.0, 10).unwrap(), 0.0);
        assert!(phi_series_partial(1.0 / 6.0, 3, 0.0, 2.0, 1.0, 10).is_err());
    }
}
