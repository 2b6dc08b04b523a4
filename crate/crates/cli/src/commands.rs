//! The subcommands.  Each returns the process exit code.

use std::fmt::Write as _;

use rayon::prelude::*;
use tricomi::fundsol::{
    constant_identities, constants, eval_e_minus, eval_e_plus, eval_f_minus, eval_f_plus, eval_tilde_e, KernelSpec,
};
use tricomi::geometry::{classify, limit_form, norm, split_point, SourcePoint};
use tricomi::specfun::Branch;
use tricomi::verify::{standard_matrix, weak_form_residual, KernelKind, MatrixEntry, QuadConfig, VerifyReport};

use crate::config::{Command, RunConfig};
use crate::{CliError, UsageError, EXIT_FAILED, EXIT_OK};

/// Residual threshold of `identities`.
pub const IDENTITY_THRESHOLD: f64 = 1e-11;

/// Fixed 17-significant-digit formatting.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// A kernel value with its region tag and, for values on a cut, the branch.
#[derive(Debug, Clone, PartialEq)]
pub struct PointValue {
    pub re: f64,
    pub im: f64,
    pub region: &'static str,
    pub branch: Option<Branch>,
}

fn region_of(kind: KernelKind, point: &[f64], source: &SourcePoint) -> &'static str {
    match kind {
        KernelKind::FMinus | KernelKind::FPlus => {
            let (x, y) = split_point(point);
            let f = limit_form(norm(x), y);
            if f < 0.0 {
                "BelowCurve"
            } else if f > 0.0 {
                "AboveCurve"
            } else {
                "OnCurve"
            }
        }
        _ => classify(point, source).name(),
    }
}

/// Value of the configured kernel at `point`.
pub fn evaluate(cfg: &RunConfig, kind: KernelKind, point: &[f64]) -> Result<PointValue, CliError> {
    let n = cfg.single_n();
    if point.len() != n + 1 {
        return Err(UsageError(format!("points need n + 1 = {} coordinates", n + 1)).into());
    }
    if matches!(kind, KernelKind::EPlus | KernelKind::ETilde) && n != 1 {
        return Err(UsageError(format!("{} is implemented for n = 1 only", kind.name())).into());
    }
    let source = SourcePoint::new(cfg.b)?;
    let region = region_of(kind, point, &source);
    let real = |re: f64| PointValue { re, im: 0.0, region, branch: None };
    let v = match kind {
        KernelKind::EMinus => real(eval_e_minus(&KernelSpec::new(n, source, cfg.branch)?, point)?),
        KernelKind::FMinus => real(eval_f_minus(n, point)?),
        KernelKind::FPlus => real(eval_f_plus(n, point)?),
        KernelKind::EPlus | KernelKind::ETilde => {
            let bv = if kind == KernelKind::EPlus {
                eval_e_plus(point, &source, cfg.branch)?
            } else {
                eval_tilde_e(point, &source, cfg.branch)?
            };
            PointValue { re: bv.value.re, im: bv.value.im, region, branch: bv.branch }
        }
    };
    Ok(v)
}

fn branch_name(b: Option<Branch>) -> &'static str {
    match b {
        Some(Branch::UpperCut) => "upper",
        Some(Branch::LowerCut) => "lower",
        None => "none",
    }
}

fn csv_header(n: usize) -> String {
    let mut h = String::new();
    if n == 1 {
        h.push_str("x,");
    } else {
        for i in 1..=n {
            write!(h, "x{i},").unwrap();
        }
    }
    h.push_str("y,value_re,value_im,region");
    h
}

fn csv_row(point: &[f64], value: Option<&PointValue>, region: &str) -> String {
    let mut row: Vec<String> = point.iter().map(|&c| fmt_num(c)).collect();
    match value {
        Some(v) => {
            row.push(fmt_num(v.re));
            row.push(fmt_num(v.im));
        }
        None => {
            row.push("nan".into());
            row.push("nan".into());
        }
    }
    row.push(region.to_string());
    row.join(",")
}

fn write_out(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    if let Some(path) = &cfg.out {
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

pub fn run(cfg: &RunConfig, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    match cfg.command {
        Command::Eval => cmd_eval(cfg, out),
        Command::Field => cmd_field(cfg, out),
        Command::Identities => cmd_identities(cfg, out),
        Command::Verify => cmd_verify(cfg, out),
        Command::Selftest => cmd_selftest(cfg, out),
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn cmd_eval(cfg: &RunConfig, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let kind = cfg.kernel.expect("checked by RunConfig");
    let point = cfg.point.as_ref().expect("checked by RunConfig");
    let v = evaluate(cfg, kind, point)?;
    let coords: Vec<String> = point.iter().map(|c| c.to_string()).collect();
    writeln!(
        out,
        "kernel={} n={} b={} point={} region={} branch={} value_re={} value_im={}",
        kind.name(),
        cfg.single_n(),
        cfg.b,
        coords.join(","),
        v.region,
        branch_name(v.branch),
        fmt_num(v.re),
        fmt_num(v.im)
    )
    .map_err(io)?;
    let csv = format!("{}\n{}\n", csv_header(cfg.single_n()), csv_row(point, Some(&v), v.region));
    write_out(cfg, &csv)?;
    Ok(EXIT_OK)
}

/// Grid rows in lexicographic `(x, y)` order; the remaining coordinates of
/// `x` are zero.  Points where the kernel is singular get `nan`.
pub fn field_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let kind = cfg.kernel.expect("checked by RunConfig");
    let grid = cfg.grid.expect("checked by RunConfig");
    let n = cfg.single_n();
    let source = SourcePoint::new(cfg.b)?;
    if matches!(kind, KernelKind::EPlus | KernelKind::ETilde) && n != 1 {
        return Err(UsageError(format!("{} is implemented for n = 1 only", kind.name())).into());
    }
    let mut points = Vec::with_capacity(grid.x.count * grid.y.count);
    for &x in &grid.x.values() {
        for &y in &grid.y.values() {
            let mut p = vec![0.0; n + 1];
            p[0] = x;
            p[n] = y;
            points.push(p);
        }
    }
    let rows: Vec<String> = points
        .par_iter()
        .map(|p| {
            let region = region_of(kind, p, &source);
            match evaluate(cfg, kind, p) {
                Ok(v) => csv_row(p, Some(&v), region),
                Err(_) => csv_row(p, None, region),
            }
        })
        .collect();
    let mut text = csv_header(n);
    text.push('\n');
    for r in rows {
        text.push_str(&r);
        text.push('\n');
    }
    Ok(text)
}

pub fn cmd_field(cfg: &RunConfig, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let text = field_csv(cfg)?;
    if cfg.out.is_some() {
        write_out(cfg, &text)?;
        let rows = text.lines().count() - 1;
        writeln!(out, "wrote {rows} rows to {}", cfg.out.as_ref().unwrap().display()).map_err(io)?;
    } else {
        out.write_all(text.as_bytes()).map_err(io)?;
    }
    Ok(EXIT_OK)
}

/// Prints constants and identity residuals; true when all pass.
fn identities_report(ns: &[usize], out: &mut dyn std::io::Write) -> Result<bool, CliError> {
    let mut ok = true;
    for &n in ns {
        let c = constants(n)?;
        writeln!(out, "n={n}").map_err(io)?;
        writeln!(out, "  A={}", fmt_num(c.a)).map_err(io)?;
        writeln!(out, "  C-={}", fmt_num(c.c_minus)).map_err(io)?;
        writeln!(out, "  C+={}", fmt_num(c.c_plus)).map_err(io)?;
        writeln!(out, "  C+ (delta-normalized)={}", fmt_num(c.c_plus_fundamental)).map_err(io)?;
        if let Some(c_n) = c.c_n {
            writeln!(out, "  c(n)={}", fmt_num(c_n)).map_err(io)?;
        }
        if let Some(a_m) = c.a_m {
            writeln!(out, "  A_m={}", fmt_num(a_m)).map_err(io)?;
        }
        if let Some(g) = c.odd_gauss_factor {
            writeln!(out, "  F(1)={}", fmt_num(g)).map_err(io)?;
        }
        for r in constant_identities(n)? {
            let pass = r.residual <= IDENTITY_THRESHOLD;
            ok &= pass;
            writeln!(out, "  {}: residual={:.3e} {}", r.name, r.residual, if pass { "PASS" } else { "FAILED" })
                .map_err(io)?;
        }
    }
    Ok(ok)
}

pub fn cmd_identities(cfg: &RunConfig, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let ok = identities_report(&cfg.n, out)?;
    writeln!(out, "identities: {}", if ok { "PASS" } else { "FAILED" }).map_err(io)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn quad_config(cfg: &RunConfig) -> QuadConfig {
    let mut q = QuadConfig::default();
    if let Some(t) = cfg.quad_tol {
        q.abs_tol = t;
        q.rel_tol = t;
    }
    if let Some(m) = cfg.max_subdivisions {
        q.max_subdivisions = m;
    }
    if let Some(t) = cfg.tol {
        q.pass_tol = t;
    }
    q
}

/// Kernels checked by `verify` when no kernel is given.
fn default_kernels(n: usize) -> Vec<KernelKind> {
    let mut ks = vec![KernelKind::EMinus];
    if n == 1 {
        ks.extend([KernelKind::EPlus, KernelKind::ETilde]);
    }
    if n <= 2 {
        ks.extend([KernelKind::FMinus, KernelKind::FPlus]);
    }
    ks
}

const CSV_REPORT_HEADER: &str = "case,bump,target,total,residual,bound,status";

fn report_row(entry: &MatrixEntry, r: &VerifyReport) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        r.label,
        entry.role.name(),
        fmt_num(r.target),
        fmt_num(r.total),
        fmt_num(r.residual),
        fmt_num(r.bound),
        if r.passed { "PASS" } else { "FAILED" }
    )
}

/// Runs entries in the worker pool and prints reports in input order.
fn run_entries(
    entries: &[MatrixEntry],
    q: &QuadConfig,
    out: &mut dyn std::io::Write,
) -> Result<(bool, Vec<String>), CliError> {
    let results: Vec<_> = entries.par_iter().map(|e| weak_form_residual(&e.case, &e.phi, q)).collect();
    let mut ok = true;
    let mut rows = Vec::new();
    for (e, r) in entries.iter().zip(results) {
        let r = r?;
        ok &= r.passed;
        writeln!(out, "bump={}\n{r}\n", e.role.name()).map_err(io)?;
        rows.push(report_row(e, &r));
    }
    Ok((ok, rows))
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let q = quad_config(cfg);
    let mut entries = Vec::new();
    for &n in &cfg.n {
        let kinds = match cfg.kernel {
            Some(k) => vec![k],
            None => default_kernels(n),
        };
        for k in kinds {
            entries.extend(standard_matrix(k, n).map_err(|e| UsageError(e.to_string()))?);
        }
    }
    let (ok, rows) = run_entries(&entries, &q, out)?;
    writeln!(out, "verify: {} ({} checks)", if ok { "PASS" } else { "FAILED" }, rows.len()).map_err(io)?;
    let mut csv = String::from(CSV_REPORT_HEADER);
    csv.push('\n');
    for r in rows {
        csv.push_str(&r);
        csv.push('\n');
    }
    write_out(cfg, &csv)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

/// Identities for `n = 1..7` and the `n = 1` weak-form matrix.
pub fn cmd_selftest(cfg: &RunConfig, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let ids = identities_report(&(1..=7).collect::<Vec<_>>(), out)?;
    let mut entries = Vec::new();
    for k in default_kernels(1) {
        entries.extend(standard_matrix(k, 1)?);
    }
    let (weak, _) = run_entries(&entries, &quad_config(cfg), out)?;
    let ok = ids && weak;
    writeln!(out, "selftest: {}", if ok { "PASS" } else { "FAILED" }).map_err(io)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Flags;

    fn config(cmd: Command, flags: Flags) -> RunConfig {
        RunConfig::resolve(cmd, &flags).unwrap()
    }

    #[test]
    fn formatting_keeps_17_digits() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn headers() {
        assert_eq!(csv_header(1), "x,y,value_re,value_im,region");
        assert_eq!(csv_header(2), "x1,x2,y,value_re,value_im,region");
    }

    #[test]
    fn limit_regions() {
        let cfg = config(Command::Eval, Flags { kernel: Some("Fminus".into()), point: Some("0,-1".into()), ..Flags::default() });
        let v = evaluate(&cfg, KernelKind::FMinus, &[0.0, -1.0]).unwrap();
        assert_eq!(v.region, "BelowCurve");
        let v = evaluate(&cfg, KernelKind::FPlus, &[0.0, 1.0]).unwrap();
        assert_eq!(v.region, "AboveCurve");
        assert_eq!(region_of(KernelKind::FPlus, &[0.0, 0.0], &SourcePoint::new(-1.0).unwrap()), "OnCurve");
    }
}
