// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use flatgeo::{FlatSurface, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    EnumerateSc,
    EnumerateGeodesics,
    Count,
    Verify,
    OracleCompare,
    SmoothingCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::EnumerateSc => "enumerate-sc",
            Command::EnumerateGeodesics => "enumerate-geodesics",
            Command::Count => "count",
            Command::Verify => "verify",
            Command::OracleCompare => "oracle-compare",
            Command::SmoothingCheck => "smoothing-check",
        }
    }
}

/// Saddle connections, closed geodesics and self-intersection counts on
/// translation surfaces with one cone point.
#[derive(Debug, Parser)]
#[command(name = "flatgeo", version)]
pub struct Args {
    /// Builtin surface: regular-octagon, L-origami-3 or origami(h,v).
    #[arg(long)]
    pub surface: Option<String>,
    /// Surface document (TOML) to load instead of a builtin.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub command: Command,
    /// Length bound, e.g. 3 or 5/2.
    #[arg(long = "L")]
    pub l: Option<String>,
    /// Comma-separated increasing lengths.
    #[arg(long = "L-grid")]
    pub l_grid: Option<String>,
    /// Comma-separated increasing crossing bounds; `inf` for no bound.
    #[arg(long = "K-grid", default_value = "0,1,2,inf")]
    pub k_grid: String,
    /// Comma-separated cone-disc radii for smoothing-check.
    #[arg(long = "t-grid", default_value = "0.1,0.05,0.01")]
    pub t_grid: String,
    #[arg(long = "budget-nodes")]
    pub budget_nodes: Option<u64>,
    #[arg(long = "budget-words")]
    pub budget_words: Option<u64>,
    #[arg(long = "primitive-only")]
    pub primitive_only: bool,
    #[arg(long)]
    pub oriented: bool,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Recorded in the summary. No algorithm here is randomised.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "flatgeo-out")]
    pub out: PathBuf,
}

#[derive(Debug)]
pub struct ConfigError {
    pub field: &'static str,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn bad(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field,
        message: message.into(),
    }
}

pub struct RunConfig {
    pub surface: FlatSurface,
    pub surface_label: String,
    pub command: Command,
    pub l: Rational,
    pub l_grid: Vec<Rational>,
    pub k_grid: Vec<Option<u64>>,
    pub t_grid: Vec<f64>,
    pub budget_nodes: Option<u64>,
    pub budget_words: Option<u64>,
    pub primitive_only: bool,
    pub oriented: bool,
    pub workers: Option<usize>,
    pub seed: u64,
    pub out: PathBuf,
}

/// Parses `3`, `5/2` or `2.5` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = whole.starts_with('-');
        let w: i128 = if whole.is_empty() || whole == "-" { 0 } else { whole.parse().ok()? };
        let den = 10i128.checked_pow(frac.len() as u32)?;
        let f: i128 = frac.parse().ok()?;
        let num = w.abs().checked_mul(den)?.checked_add(f)?;
        return Some(Rational::new(if neg { -num } else { num }, den));
    }
    let r: Rational = s.parse().ok()?;
    Some(r)
}

fn parse_list<T>(field: &'static str, text: &str, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, ConfigError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.is_empty() {
        return Err(bad(field, "empty list"));
    }
    parts
        .iter()
        .map(|p| item(p).ok_or_else(|| bad(field, format!("cannot parse `{p}`"))))
        .collect()
}

pub fn parse_l_grid(text: &str) -> Result<Vec<Rational>, ConfigError> {
    let v = parse_list("--L-grid", text, parse_rational)?;
    if v.iter().any(|l| *l <= Rational::from_integer(0)) {
        return Err(bad("--L-grid", "lengths must be positive"));
    }
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("--L-grid", format!("`{text}` is not strictly increasing")));
    }
    Ok(v)
}

pub fn parse_k_grid(text: &str) -> Result<Vec<Option<u64>>, ConfigError> {
    let v = parse_list("--K-grid", text, |p| match p {
        "inf" | "∞" => Some(None),
        _ => p.parse::<u64>().ok().map(Some),
    })?;
    let increasing = v.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => a < b,
        (Some(_), None) => true,
        _ => false,
    });
    if !increasing {
        return Err(bad("--K-grid", format!("`{text}` is not strictly increasing with inf last")));
    }
    Ok(v)
}

pub fn parse_t_grid(text: &str) -> Result<Vec<f64>, ConfigError> {
    let v = parse_list("--t-grid", text, |p| p.parse::<f64>().ok())?;
    if v.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(bad("--t-grid", "radii must be positive"));
    }
    Ok(v)
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self, ConfigError> {
        let (surface, surface_label) = match (&args.surface, &args.spec) {
            (Some(_), Some(_)) => return Err(bad("--surface", "give either --surface or --spec, not both")),
            (None, None) => return Err(bad("--surface", "a surface is required (--surface or --spec)")),
            (Some(name), None) => (
                flatgeo::builtin_surface(name).map_err(|e| bad("--surface", e.to_string()))?,
                name.clone(),
            ),
            (None, Some(path)) => {
                let doc = std::fs::read_to_string(path)
                    .map_err(|e| bad("--spec", format!("{}: {e}", path.display())))?;
                (
                    flatgeo::load_surface(&doc).map_err(|e| bad("--spec", e.to_string()))?,
                    path.display().to_string(),
                )
            }
        };
        let l = match &args.l {
            Some(s) => {
                let l = parse_rational(s).ok_or_else(|| bad("--L", format!("cannot parse `{s}`")))?;
                if l <= Rational::from_integer(0) {
                    return Err(bad("--L", "length must be positive"));
                }
                Some(l)
            }
            None => None,
        };
        let l_grid = match &args.l_grid {
            Some(s) => parse_l_grid(s)?,
            None => match l {
                Some(l) => vec![l],
                None => (1..=3).map(Rational::from_integer).collect(),
            },
        };
        let l = l.unwrap_or(*l_grid.last().unwrap());
        if args.workers == Some(0) {
            return Err(bad("--workers", "must be at least 1"));
        }
        Ok(RunConfig {
            surface,
            surface_label,
            command: args.command,
            l,
            l_grid,
            k_grid: parse_k_grid(&args.k_grid)?,
            t_grid: parse_t_grid(&args.t_grid)?,
            budget_nodes: args.budget_nodes,
            budget_words: args.budget_words,
            primitive_only: args.primitive_only,
            oriented: args.oriented,
            workers: args.workers,
            seed: args.seed,
            out: args.out,
        })
    }
}
