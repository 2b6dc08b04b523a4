use std::f64::consts::PI;

use crate::error::{domain, Result};

use super::is_nonpositive_integer;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

fn lanczos_sum(z: f64) -> f64 {
    // z is the argument shifted down by one: Γ(z + 1).
    let mut s = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + k as f64);
    }
    s
}

fn gamma_raw(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_raw(1.0 - x));
    }
    if x == x.round() && x <= 171.0 {
        return (1..x as u64).map(|k| k as f64).product();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    if x > 140.0 {
        // split the power to avoid overflow before the exponential
        let p = t.powf(0.5 * (z + 0.5));
        return (2.0 * PI).sqrt() * p * (p * (-t).exp()) * lanczos_sum(z);
    }
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// The Gamma function; a domain error at its poles.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return domain(format!("Gamma has a pole at {x}"));
    }
    if x.is_nan() {
        return domain("Gamma of NaN");
    }
    Ok(gamma_raw(x))
}

/// `1 / Γ(x)`, equal to zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 171.0 {
        return 0.0;
    }
    if x < 0.5 {
        return (PI * x).sin() * gamma_raw(1.0 - x) / PI;
    }
    1.0 / gamma_raw(x)
}

/// `ln |Γ(x)|`.
pub fn ln_gamma_abs(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return domain(format!("Gamma has a pole at {x}"));
    }
    if x < 0.5 {
        let s = (PI * x).sin().abs();
        return Ok(PI.ln() - s.ln() - ln_gamma_abs(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    Ok(gamma(a)? * gamma(b)? * rgamma(a + b))
}

/// The rising factorial `(a)_k`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |p, j| p * (a + j as f64))
}

/// The digamma function `ψ = Γ'/Γ`; a domain error at the poles.
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return domain(format!("digamma has a pole at {x}"));
    }
    Ok(digamma_raw(x))
}

pub(crate) fn digamma_raw(x: f64) -> f64 {
    if x < 0.5 {
        return digamma_raw(1.0 - x) - PI / (PI * x).tan();
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 12.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let tail = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 / x - tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-15);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-13);
        assert!((gamma(1.0 / 3.0).unwrap() - 2.678_938_534_707_747_6).abs() < 2e-15);
        assert!((gamma(-1.5).unwrap() - 4.0 * PI.sqrt() / 3.0).abs() < 1e-14);
        assert!(gamma(-2.0).is_err());
        assert_eq!(rgamma(-3.0), 0.0);
        assert!((digamma(1.0).unwrap() + 0.577_215_664_901_532_9).abs() < 1e-15);
        assert!((digamma(0.5).unwrap() + 0.577_215_664_901_532_9 + 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!((digamma(-0.5).unwrap() - 0.036_489_973_978_576_52).abs() < 1e-14);
        assert!((ln_gamma_abs(200.0).unwrap() - 857.933_669_825_857_2).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn recurrence(x in -6.0f64..20.0) {
            let dist = (x - x.round()).abs();
            prop_assume!(dist > 1e-3);
            // sin(πx) near a pole costs |x|/dist in relative accuracy
            let cond = 1.0 + x.abs() / dist;
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-15 * cond * lhs.abs().max(1.0) + 1e-13 * lhs.abs().max(1.0));
            let (p1, p0) = (digamma(x + 1.0).unwrap(), digamma(x).unwrap());
            let scale = p1.abs().max(p0.abs()).max(1.0);
            prop_assert!((p1 - p0 - 1.0 / x).abs() <= 1e-15 * cond * scale + 1e-13 * scale);
        }

        #[test]
        fn reflection(x in 0.01f64..0.99) {
            let p = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
            prop_assert!((p * (PI * x).sin() / PI - 1.0).abs() < 1e-14);
        }
    }
}
