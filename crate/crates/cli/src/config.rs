//! Run configuration: an optional TOML file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;
use tricomi::specfun::Branch;
use tricomi::verify::KernelKind;

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Kernel value at one point.
    Eval,
    /// Kernel values on a grid, written as CSV.
    Field,
    /// Constant identities per dimension.
    Identities,
    /// Weak-form checks of the fundamental-solution property.
    Verify,
    /// Identities plus the fast weak-form checks.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Field => "field",
            Command::Identities => "identities",
            Command::Verify => "verify",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BranchArg {
    Upper,
    Lower,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Upper => Branch::UpperCut,
            BranchArg::Lower => Branch::LowerCut,
        }
    }
}

/// Flags shared by all subcommands.
#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// Dimension of x, or a comma-separated list for identities and verify.
    #[arg(long)]
    pub n: Option<String>,
    /// Ordinate of the source (0, b), b < 0.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Eminus, Eplus, Etilde (alias EtildeNull), Fminus or Fplus.
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Comma-separated coordinates x_1,…,x_n,y.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// xmin:xmax:nx,ymin:ymax:ny
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Pass tolerance of verification, relative to sup|φ|.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Absolute and relative quadrature tolerance.
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Keys accepted in the TOML file; they mirror the flag names.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<NValue>,
    b: Option<f64>,
    kernel: Option<String>,
    branch: Option<BranchArg>,
    point: Option<PointValue>,
    grid: Option<String>,
    tol: Option<f64>,
    quad_tol: Option<f64>,
    max_subdivisions: Option<usize>,
    out: Option<PathBuf>,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum NValue {
    One(usize),
    Many(Vec<usize>),
    Text(String),
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum PointValue {
    Coords(Vec<f64>),
    Text(String),
}

/// One axis of a grid: `n` equispaced values from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.max } else { self.min + i as f64 * h }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x: Axis,
    pub y: Axis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: Vec<usize>,
    pub b: f64,
    pub kernel: Option<KernelKind>,
    pub branch: Branch,
    pub point: Option<Vec<f64>>,
    pub grid: Option<GridSpec>,
    pub tol: Option<f64>,
    pub quad_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub out: Option<PathBuf>,
}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, UsageError> {
    s.split(',')
        .map(|p| p.trim().parse::<T>().or_else(|_| usage(format!("cannot parse {what} entry '{p}'"))))
        .collect()
}

pub fn parse_grid(s: &str) -> Result<GridSpec, UsageError> {
    let axes: Vec<&str> = s.split(',').collect();
    if axes.len() != 2 {
        return usage("--grid expects xmin:xmax:nx,ymin:ymax:ny");
    }
    let axis = |a: &str| -> Result<Axis, UsageError> {
        let parts: Vec<&str> = a.split(':').collect();
        if parts.len() != 3 {
            return usage(format!("grid axis '{a}' is not min:max:count"));
        }
        let min: f64 = parts[0].trim().parse().or_else(|_| usage(format!("bad grid bound '{}'", parts[0])))?;
        let max: f64 = parts[1].trim().parse().or_else(|_| usage(format!("bad grid bound '{}'", parts[1])))?;
        let count: usize = parts[2].trim().parse().or_else(|_| usage(format!("bad grid count '{}'", parts[2])))?;
        if count == 0 || !(min.is_finite() && max.is_finite()) || (count > 1 && max <= min) {
            return usage(format!("grid axis '{a}' needs finite min < max and a positive count"));
        }
        Ok(Axis { min, max, count })
    };
    Ok(GridSpec { x: axis(axes[0])?, y: axis(axes[1])? })
}

fn read_file(path: &Path) -> Result<FileConfig, UsageError> {
    let text = std::fs::read_to_string(path)
        .or_else(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).or_else(|e| usage(format!("invalid config {}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, UsageError> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let n = match (&flags.n, file.n) {
            (Some(s), _) => parse_list(s, "--n")?,
            (None, Some(NValue::One(k))) => vec![k],
            (None, Some(NValue::Many(v))) => v,
            (None, Some(NValue::Text(s))) => parse_list(&s, "n")?,
            (None, None) if command == Command::Identities => (1..=7).collect(),
            (None, None) => vec![1],
        };
        if n.is_empty() || n.contains(&0) {
            return usage("n must be a positive integer");
        }
        let b = flags.b.or(file.b).unwrap_or(-1.0);
        if !(b < 0.0 && b.is_finite()) {
            return usage(format!("the source ordinate b must be negative, got {b}"));
        }
        let kernel = match flags.kernel.clone().or(file.kernel) {
            Some(k) => Some(KernelKind::parse(&k).map_or_else(|| usage(format!("unknown kernel '{k}'")), Ok)?),
            None => None,
        };
        let branch = flags.branch.or(file.branch).unwrap_or(BranchArg::Upper).into();
        let point = match (&flags.point, file.point) {
            (Some(s), _) => Some(parse_list(s, "--point")?),
            (None, Some(PointValue::Coords(v))) => Some(v),
            (None, Some(PointValue::Text(s))) => Some(parse_list(&s, "point")?),
            (None, None) => None,
        };
        let grid = match flags.grid.clone().or(file.grid) {
            Some(g) => Some(parse_grid(&g)?),
            None => None,
        };
        let tol = flags.tol.or(file.tol);
        let quad_tol = flags.quad_tol.or(file.quad_tol);
        for t in [tol, quad_tol].into_iter().flatten() {
            if !(t > 0.0 && t.is_finite()) {
                return usage(format!("tolerances must be positive, got {t}"));
            }
        }
        let cfg = RunConfig {
            command,
            n,
            b,
            kernel,
            branch,
            point,
            grid,
            tol,
            quad_tol,
            max_subdivisions: flags.max_subdivisions.or(file.max_subdivisions),
            out: flags.out.clone().or(file.out),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), UsageError> {
        match self.command {
            Command::Eval | Command::Field => {
                if self.n.len() != 1 {
                    return usage(format!("{} takes a single n", self.command.name()));
                }
                if self.kernel.is_none() {
                    return usage(format!("{} needs --kernel", self.command.name()));
                }
            }
            _ => {}
        }
        match self.command {
            Command::Eval => {
                let Some(p) = &self.point else { return usage("eval needs --point") };
                if p.len() != self.n[0] + 1 {
                    return usage(format!("--point needs n + 1 = {} coordinates", self.n[0] + 1));
                }
            }
            Command::Field if self.grid.is_none() => return usage("field needs --grid"),
            _ => {}
        }
        Ok(())
    }

    pub fn single_n(&self) -> usize {
        self.n[0]
    }
}
