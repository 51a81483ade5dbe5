//! Batch front end: one subcommand per capability, JSON or CSV output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::boxdist::{self, BoxDistance, BoxProhorovReport};
use crate::error::{Error, Result};
use crate::maxdetect::{self, DetectorReport};
use crate::measure1d::{self, Cdf, DiscreteMeasure1D, MonotoneMap};
use crate::mmspace::{self, FiniteMMSpace, ObsDiamOptions, ObservableDiameter};
use crate::order::{self, Dominance};
use crate::sphere::{self, LimitRow, NormalLawRow};

/// Exit status for results that are undecided or cut off by a budget.
pub const EXIT_UNDECIDED: i32 = 2;
/// Exit status for malformed input.
pub const EXIT_INPUT: i32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Decide μ ≺ ν for two measures on the line.
    Order,
    /// Tabulate a generalized inverse, or transport one law onto another.
    Quantile,
    /// Look for two non-isomorphic maximal elements of the 1-measurement.
    CheckMax,
    /// Observable diameter of a finite mm-space.
    Obsdiam,
    /// Box distance between two spaces, or the Prohorov comparison on one.
    Boxdist,
    /// Gaussian limit table of the shifted sphere distance law.
    SphereLimit,
    /// Partial diameters of a sphere coordinate against the Gaussian.
    NormalLaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

/// Everything one run needs. Parsed from flags or from a JSON file; unknown
/// JSON fields are rejected.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[arg(value_enum)]
    #[serde(default)]
    pub command: Option<Command>,
    /// Finite mm-space file; given twice for `boxdist` between two spaces.
    #[arg(long)]
    #[serde(default)]
    pub space: Vec<PathBuf>,
    /// Measure, distribution function or weight vector file.
    #[arg(long)]
    #[serde(default)]
    pub mu: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub nu: Option<PathBuf>,
    /// κ ∈ (0, 1); may be repeated for `normal-law`.
    #[arg(long)]
    #[serde(default)]
    pub kappa: Vec<f64>,
    #[arg(long)]
    #[serde(default)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
    #[arg(long)]
    #[serde(default)]
    pub budget: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(default)]
    pub format: Option<Format>,
    /// Sphere dimension.
    #[arg(long)]
    #[serde(default)]
    pub n: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub rmax: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub step: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub samples: Option<usize>,
    /// Transport grid step relative to the source support.
    #[arg(long)]
    #[serde(default)]
    pub grid: Option<f64>,
    /// Levels at which `quantile` evaluates the generalized inverse.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub levels: Vec<f64>,
}

#[derive(Debug, Parser)]
#[command(name = "mmlab", version, about = "Metric measure geometry on finite spaces and spheres")]
pub struct Cli {
    /// Read the run configuration from a JSON file instead of flags.
    #[arg(long, conflicts_with = "command")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunConfig,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        match self.config {
            Some(path) => load_json(&path),
            None => Ok(self.run),
        }
    }
}

fn range_error(what: &'static str, value: f64) -> Error {
    Error::OutOfRange { what, value }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.command.is_none() {
            return Err(Error::Config("no command given".into()));
        }
        if let Some(&k) = self.kappa.iter().find(|k| !(**k > 0.0 && **k < 1.0)) {
            return Err(range_error("kappa", k));
        }
        if let Some(&s) = self.levels.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(range_error("level", s));
        }
        let positive = [("tol", self.tol), ("step", self.step), ("grid", self.grid)];
        for (what, value) in positive {
            if let Some(v) = value.filter(|v| !(*v > 0.0 && v.is_finite())) {
                return Err(range_error(what, v));
            }
        }
        if let Some(g) = self.grid.filter(|g| *g > 0.5) {
            return Err(range_error("grid", g));
        }
        if let Some(r) = self.rmax.filter(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(range_error("rmax", r));
        }
        if self.n == Some(0) {
            return Err(range_error("n", 0.0));
        }
        if self.samples == Some(0) {
            return Err(range_error("samples", 0.0));
        }
        if self.budget == Some(0) {
            return Err(range_error("budget", 0.0));
        }
        Ok(())
    }
}

/// Reads a JSON file; errors name the file, line and column.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// A distribution function file, or a measure whose CDF is taken.
fn load_cdf(path: &Path) -> Result<Cdf> {
    let value: serde_json::Value = load_json(path)?;
    let parsed = if value.get("kind").is_some() {
        serde_json::from_value::<Cdf>(value)
    } else {
        serde_json::from_value::<DiscreteMeasure1D>(value).map(|m| measure1d::cdf(&m))
    };
    parsed.map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn required<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T> {
    value.as_ref().ok_or_else(|| Error::Config(format!("--{flag} is required")))
}

fn single_space(cfg: &RunConfig) -> Result<FiniteMMSpace> {
    match cfg.space.as_slice() {
        [path] => load_json(path),
        _ => Err(Error::Config("exactly one --space is required".into())),
    }
}

fn single_kappa(cfg: &RunConfig) -> Result<f64> {
    match cfg.kappa.as_slice() {
        [k] => Ok(*k),
        _ => Err(Error::Config("exactly one --kappa is required".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderReport {
    pub holds: Option<bool>,
    pub isomorphic: bool,
    pub result: Dominance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantileTable {
    pub levels: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportReport {
    pub map: MonotoneMap,
    /// sup |CDF of φ_*(source) − target| over the target breakpoints.
    pub ks: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitReport {
    pub n: u64,
    pub max_error: f64,
    pub rows: Vec<LimitRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalLawReport {
    pub n: u64,
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<NormalLawRow>,
}

/// Output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub body: String,
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn no_csv(cfg: &RunConfig, command: &str) -> Result<()> {
    if cfg.format == Some(Format::Csv) {
        return Err(Error::Config(format!("{command} has no CSV output")));
    }
    Ok(())
}

/// Runs one command. Writes the body to `out` when given.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let command = cfg.command.expect("validated");
    let outcome = match command {
        Command::Order => run_order(cfg)?,
        Command::Quantile => run_quantile(cfg)?,
        Command::CheckMax => {
            no_csv(cfg, "check-max")?;
            let space = single_space(cfg)?;
            let report: DetectorReport = maxdetect::detect(&space, cfg.tol.unwrap_or(maxdetect::DEFAULT_TOL))?;
            Outcome { status: 0, body: json(&report)? }
        }
        Command::Obsdiam => {
            no_csv(cfg, "obsdiam")?;
            let space = single_space(cfg)?;
            let opts = ObsDiamOptions {
                budget: cfg.budget.map_or(ObsDiamOptions::default().budget, |b| b as usize),
                seed: cfg.seed,
            };
            let result: ObservableDiameter = mmspace::observable_diameter(&space, single_kappa(cfg)?, opts)?;
            Outcome { status: 0, body: json(&result)? }
        }
        Command::Boxdist => run_boxdist(cfg)?,
        Command::SphereLimit => {
            let n = *required(&cfg.n, "n")?;
            let rows = sphere::limit_table(n, cfg.rmax.unwrap_or(3.0), cfg.step.unwrap_or(0.1))?;
            let max_error = rows.iter().map(|r| r.error).fold(0.0, f64::max);
            let body = match cfg.format.unwrap_or(Format::Csv) {
                Format::Csv => sphere::limit_table_csv(&rows),
                Format::Json => json(&LimitReport { n, max_error, rows })?,
            };
            Outcome { status: 0, body }
        }
        Command::NormalLaw => {
            let n = cfg.n.unwrap_or(100);
            let samples = cfg.samples.unwrap_or(100_000);
            let kappas = if cfg.kappa.is_empty() { vec![0.1, 0.05, 0.01] } else { cfg.kappa.clone() };
            let rows = sphere::normal_law_rows(n, samples, cfg.seed, &kappas)?;
            let body = match cfg.format.unwrap_or(Format::Json) {
                Format::Json => json(&NormalLawReport { n, samples, seed: cfg.seed, rows })?,
                Format::Csv => {
                    let mut s = String::from("kappa,sample,gaussian\n");
                    for r in &rows {
                        writeln!(s, "{},{},{}", r.kappa, r.sample, r.gaussian).expect("writing to a String");
                    }
                    s
                }
            };
            Outcome { status: 0, body }
        }
    };
    if let Some(path) = &cfg.out {
        std::fs::write(path, &outcome.body)?;
    }
    Ok(outcome)
}

fn run_order(cfg: &RunConfig) -> Result<Outcome> {
    no_csv(cfg, "order")?;
    let mu: DiscreteMeasure1D = load_json(required(&cfg.mu, "mu")?)?;
    let nu: DiscreteMeasure1D = load_json(required(&cfg.nu, "nu")?)?;
    let result = order::dominates_bruteforce(&mu, &nu, cfg.budget.unwrap_or(order::DEFAULT_BUDGET));
    let holds = result.holds();
    let report = OrderReport { holds, isomorphic: order::mm_isomorphic_1d(&mu, &nu), result };
    Ok(Outcome { status: if holds.is_none() { EXIT_UNDECIDED } else { 0 }, body: json(&report)? })
}

fn run_quantile(cfg: &RunConfig) -> Result<Outcome> {
    let f = load_cdf(required(&cfg.mu, "mu")?)?;
    if let Some(target) = &cfg.nu {
        no_csv(cfg, "quantile with --nu")?;
        let g = load_cdf(target)?;
        let map = order::monotone_transport(&f, &g, cfg.grid.unwrap_or(1e-4))?;
        let ks = g
            .breakpoints()
            .iter()
            .map(|&y| (map.pushforward_cdf(&f, y) - g.eval(y)).abs())
            .fold(0.0, f64::max);
        return Ok(Outcome { status: 0, body: json(&TransportReport { map, ks })? });
    }
    let q = measure1d::quantile(&f)?;
    let levels = if cfg.levels.is_empty() { (0..=10).map(|k| k as f64 / 10.0).collect() } else { cfg.levels.clone() };
    let values: Vec<f64> = levels.iter().map(|&s| q.eval(s)).collect();
    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json(&QuantileTable { levels, values })?,
        Format::Csv => {
            let mut s = String::from("s,quantile\n");
            for (l, v) in levels.iter().zip(&values) {
                writeln!(s, "{l},{v}").expect("writing to a String");
            }
            s
        }
    };
    Ok(Outcome { status: 0, body })
}

fn run_boxdist(cfg: &RunConfig) -> Result<Outcome> {
    no_csv(cfg, "boxdist")?;
    let budget = cfg.budget.unwrap_or(boxdist::DEFAULT_BUDGET);
    match (cfg.space.as_slice(), &cfg.mu, &cfg.nu) {
        ([a, b], None, None) => {
            let (x, y): (FiniteMMSpace, FiniteMMSpace) = (load_json(a)?, load_json(b)?);
            let result: BoxDistance = boxdist::box_distance_small(&x, &y, budget);
            let status = if result.exact { 0 } else { EXIT_UNDECIDED };
            Ok(Outcome { status, body: json(&result)? })
        }
        ([base], Some(mu), Some(nu)) => {
            let space: FiniteMMSpace = load_json(base)?;
            let (w1, w2): (Vec<f64>, Vec<f64>) = (load_json(mu)?, load_json(nu)?);
            let report: BoxProhorovReport = boxdist::prokhorov_bound_check(space.distances(), &w1, &w2, budget)?;
            let status = if report.exact { 0 } else { EXIT_UNDECIDED };
            Ok(Outcome { status, body: json(&report)? })
        }
        _ => Err(Error::Config("boxdist takes two --space files, or one --space with --mu and --nu weight files".into())),
    }
}

/// Caps the global thread pool at MMLAB_THREADS when set.
pub fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var("MMLAB_THREADS") {
        let threads: usize = value
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Error::Config(format!("MMLAB_THREADS={value} is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    Ok(())
}

/// Parses arguments, runs, prints, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return status;
        }
    };
    let result = configure_threads().and_then(|()| cli.into_config()).and_then(|cfg| {
        let outcome = run(&cfg)?;
        if cfg.out.is_none() {
            print!("{}", outcome.body);
        }
        Ok(outcome.status)
    });
    match result {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
