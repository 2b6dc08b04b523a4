//! Acceptance suite: one PASS/FAIL line per criterion, then a non-zero
//! exit if any criterion failed.  Runs without the libtest harness so the
//! lines are printed on success too.

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricomi::chi::{
    chi_action_1d, chi_action_1d_depth, default_depth, epd_box_identity_residual, euler_identity_residual, BumpTestFunction, Smooth1d};
use tricomi::fundsol::{
    constants, e_minus_radial, e_minus_xt, epd_coefficients_exact, epd_recurrence_exact, epd_recurrence_residuals,
    gamma_identity_value, phi_closed_form, phi_series_partial, KernelSpec,
};
use tricomi::geometry::{to_y, SourcePoint};
use tricomi::specfun::{hyp2f1, hyp2f1_oracle, hyp2f1_with, pfaff_transform, Branch, HypTriple, Regime};
use tricomi::verify::{limit_check, standard_matrix, weak_form_residual, KernelKind, QuadConfig};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn c1_gamma_identity() -> Outcome {
    let r = (gamma_identity_value() - 1.0).abs();
    outcome(r <= 1e-13, format!("|2^(1/3) sqrt(pi) G(2/3) / (3 G(5/6) G(4/3)) - 1| = {r:.2e} (tol 1e-13)"))
}

fn c2_constants() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [2, 4, 6] {
        let c = constants(n).unwrap();
        worst = worst.max((c.a - c.c_minus).abs());
    }
    for n in [3, 5] {
        let c = constants(n).unwrap();
        worst = worst.max((c.a * c.odd_gauss_factor.unwrap() - c.c_minus).abs());
    }
    for n in [2, 4] {
        let c = constants(n).unwrap();
        worst = worst.max((c.c_plus / c.c_minus - c.ratio_formula).abs());
    }
    let c2 = constants(2).unwrap();
    let third = (c2.c_plus / c2.c_minus + 1.0 / 3.0).abs();
    worst = worst.max(third);
    outcome(worst <= 1e-12, format!("max residual {worst:.2e} (tol 1e-12); C+/C- at n=2 off -1/3 by {third:.2e}"))
}

fn c3_hypergeometric() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_pfaff: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for _ in 0..100 {
        let b = rng.gen_range(0.05..2.9);
        let c = rng.gen_range(b + 0.05..3.0);
        let a = rng.gen_range(0.05..2.95);
        let z = rng.gen_range(-0.9..0.9);
        let p = HypTriple::new(a, b, c).unwrap();
        let s = hyp2f1(p, Complex64::new(z, 0.0), None).unwrap().value.re;
        let f = pfaff_transform(p, Complex64::new(z, 0.0), None).unwrap().value.re;
        let o = hyp2f1_oracle(p, z).unwrap();
        worst_pfaff = worst_pfaff.max(rel(s, f));
        worst_oracle = worst_oracle.max(rel(s, o)).max(rel(f, o));
    }
    let p = HypTriple::new(1.0 / 6.0, 1.0 / 6.0, 1.0).unwrap();
    let mut worst_log: f64 = 0.0;
    for i in 0..=34 {
        let z = Complex64::new(-1.5 - 0.25 * i as f64, 0.0);
        let inv = hyp2f1_with(p, z, None, Regime::Inversion).unwrap().value.re;
        let pf = pfaff_transform(p, z, None).unwrap().value.re;
        worst_log = worst_log.max(rel(inv, pf));
    }
    let ok = worst_pfaff <= 1e-9 && worst_oracle <= 1e-9 && worst_log <= 1e-8;
    outcome(
        ok,
        format!(
            "series/Pfaff {worst_pfaff:.2e}, vs oracle {worst_oracle:.2e} (tol 1e-9); log continuation vs Pfaff {worst_log:.2e} (tol 1e-8)"
        ),
    )
}

struct Derivative<'a>(&'a BumpTestFunction);

impl Smooth1d for Derivative<'_> {
    fn support_interval(&self) -> (f64, f64) {
        self.0.support_interval()
    }

    fn derivative(&self, k: usize, s: f64) -> f64 {
        Smooth1d::derivative(self.0, k + 1, s)
    }
}

fn c4_chi_calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let bumps: Vec<BumpTestFunction> = (0..10)
        .map(|_| BumpTestFunction::new(&[rng.gen_range(-0.3..0.6)], rng.gen_range(0.4..0.9), 1.0).unwrap())
        .collect();
    let mut euler: f64 = 0.0;
    let mut deriv: f64 = 0.0;
    let mut collapse: f64 = 0.0;
    for phi in &bumps {
        let scale = phi.sup_norm();
        for q in [1.0, 0.5, -0.3, -1.5] {
            euler = euler.max(euler_identity_residual(q, phi).unwrap() / scale);
        }
        for q in [-2.5, -1.0, -0.3, 0.0, 0.7] {
            let lhs = chi_action_1d(q, phi).unwrap();
            // one integration by parts deeper than the left side, so the two
            // routes integrate different derivatives of φ
            let depth = default_depth(q + 1.0) + 1;
            let rhs = -chi_action_1d_depth(q + 1.0, &Derivative(phi), depth).unwrap();
            deriv = deriv.max((lhs - rhs).abs() / scale);
        }
        for m in 1..=3usize {
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            let exact = sign * Smooth1d::derivative(phi, m - 1, 0.0);
            let v = chi_action_1d(-(m as f64), phi).unwrap();
            collapse = collapse.max((v - exact).abs() / scale.max(exact.abs()));
        }
    }
    let phi1 = BumpTestFunction::new(&[0.1, 2.2], 0.6, 1.0).unwrap();
    let phi2 = BumpTestFunction::new(&[0.2, -0.1, 2.5], 0.7, 1.0).unwrap();
    let (b1, t1) = epd_box_identity_residual(2, 1, 1.0, &phi1).unwrap();
    let (b2, t2) = epd_box_identity_residual(3, 2, 1.0, &phi2).unwrap();
    let epd = b1.max(t1).max(b2).max(t2);
    let ok = euler <= 1e-9 && deriv <= 1e-9 && collapse <= 1e-9 && epd <= 1e-6;
    outcome(
        ok,
        format!(
            "Euler {euler:.2e}, derivative {deriv:.2e}, delta collapse {collapse:.2e} (tol 1e-9); EPD identities {epd:.2e} (tol 1e-6)"
        ),
    )
}

fn c5_coefficients() -> Outcome {
    let mut exact = true;
    for (num, den) in [(1, 6), (1, 3), (5, 6), (-1, 2)] {
        let alpha = BigRational::new(BigInt::from(num), BigInt::from(den));
        let closed = epd_coefficients_exact(&alpha, 50);
        let rec = epd_recurrence_exact(&alpha, 50);
        exact &= closed == rec;
        exact &= epd_recurrence_residuals(&alpha, &closed).iter().all(Zero::is_zero);
    }
    let mut worst: f64 = 0.0;
    let t0: f64 = 1.0;
    for n in [1, 2] {
        for alpha in [1.0 / 6.0, 1.0 / 3.0] {
            for &ratio in &[0.05, 0.3, 0.5, 0.7] {
                for &t in &[1.5, 2.5, 4.0] {
                    // k = ratio · 4 t0 t, with r fixed by k = (t - t0)² - r²
                    let k = ratio * 4.0 * t0 * t;
                    let tau: f64 = t - t0;
                    let r2 = tau * tau - k;
                    if r2 < 0.0 {
                        continue;
                    }
                    let r = r2.sqrt();
                    let s = phi_series_partial(alpha, n, r, t, t0, 80).unwrap();
                    let c = phi_closed_form(alpha, n, r, t, t0).unwrap();
                    worst = worst.max(rel(s, c));
                }
            }
        }
    }
    outcome(
        exact && worst <= 1e-9,
        format!("recurrence = closed form for j <= 50: {exact}; series vs closed form {worst:.2e} (tol 1e-9)"),
    )
}

/// Quadrature tolerance of the weak-form matrix.
const WEAK_FORM_QUAD_TOL: f64 = 1e-6;
// n = 3 is nested four deep; its pass bound is 1e-2
const WEAK_FORM_QUAD_TOL_N3: f64 = 1e-4;

fn c6_weak_form() -> Outcome {
    let plan: Vec<(KernelKind, usize, f64)> = vec![
        (KernelKind::EMinus, 1, 1e-3),
        (KernelKind::EMinus, 2, 1e-3),
        (KernelKind::EMinus, 3, 1e-2),
        (KernelKind::FMinus, 1, 1e-3),
        (KernelKind::FMinus, 2, 1e-3),
        (KernelKind::FPlus, 1, 1e-3),
        (KernelKind::FPlus, 2, 1e-3),
        (KernelKind::ETilde, 1, 1e-3),
        (KernelKind::EPlus, 1, 1e-3),
    ];
    let mut all = true;
    let mut worst = String::new();
    let mut worst_ratio: f64 = 0.0;
    let mut count = 0;
    for (kind, n, tol) in plan {
        let q = if n >= 3 { WEAK_FORM_QUAD_TOL_N3 } else { WEAK_FORM_QUAD_TOL };
        let cfg = QuadConfig { abs_tol: q, rel_tol: q, ..QuadConfig::default() };
        for e in standard_matrix(kind, n).unwrap() {
            let r = weak_form_residual(&e.case, &e.phi, &cfg.with_pass_tol(tol)).unwrap();
            println!(
                "    {:32} residual {:.2e} bound {:.2e} {:.1}s {}",
                e.label(),
                r.residual,
                r.bound,
                r.wall_time,
                if r.passed { "PASS" } else { "FAILED" }
            );
            count += 1;
            all &= r.passed;
            let ratio = r.residual / r.bound;
            if ratio >= worst_ratio {
                worst_ratio = ratio;
                worst = format!("{} at {:.2e} of its bound", e.label(), ratio);
            }
        }
    }
    outcome(all, format!("{count} checks; worst {worst}"))
}

fn c7_limits() -> Outcome {
    let bs = [-0.5, -0.1, -0.02];
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [1, 2] {
        let base = [(0.0, -2.0), (0.5, -2.0), (1.0, -2.5), (0.3, -1.5), (1.5, -3.0), (0.2, -0.9)];
        let points: Vec<Vec<f64>> = base
            .iter()
            .map(|&(x, y)| {
                let mut p = vec![0.0; n + 1];
                p[0] = x;
                p[n] = y;
                p
            })
            .collect();
        let rows = limit_check(n, &points, &bs).unwrap();
        let good = rows.iter().filter(|r| r.note.is_none() && r.strictly_decreasing).count();
        let bad = rows.iter().filter(|r| r.note.is_none() && !r.strictly_decreasing).count();
        ok &= good >= 5 && bad == 0;
        detail.push(format!("n={n}: {good} points decreasing, {bad} not"));
    }
    outcome(ok, detail.join("; "))
}

fn c8_two_paths() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for n in [1, 2] {
        let source = SourcePoint::new(-1.0).unwrap();
        let spec = KernelSpec::new(n, source, Branch::LowerCut).unwrap();
        let t0 = source.t0();
        for _ in 0..500 {
            let t = t0 + rng.gen_range(0.05..3.0);
            let r = (t - t0) * rng.gen_range(0.0..0.95);
            let y = to_y(t).unwrap();
            let a = e_minus_radial(&spec, r, y).unwrap();
            let b = e_minus_xt(&spec, r, t).unwrap();
            worst = worst.max(rel(a, b));
        }
    }
    outcome(worst <= 1e-11, format!("max relative gap {worst:.2e} over 2 x 500 points (tol 1e-11)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("gamma identity", c1_gamma_identity),
        ("constant reconciliation", c2_constants),
        ("hypergeometric substrate", c3_hypergeometric),
        ("chi_q calculus", c4_chi_calculus),
        ("coefficient engine", c5_coefficients),
        ("weak-form matrix", c6_weak_form),
        ("limit checks", c7_limits),
        ("two-path equality", c8_two_paths),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        println!(
            "criterion {} ({name}): {} [{:.1}s] {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
