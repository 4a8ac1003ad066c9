//! Command-line front end. Each subcommand's arguments double as a
//! serializable record inside [`RunConfig`], so any run can be saved with
//! `--save-config` and replayed with `wqpe run <file>`.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::emulator::{self, EmulationParams, EmulationReport, DEFAULT_BRANCH_FACTOR};
use crate::error::{Error, Result};
use crate::instances;
use crate::qpe;
use crate::resources::{
    self, CostModel, ErrorBudget, EstimateOptions, HighwaterCoefficients, Observable, ResourceCase, SystemCase, Tables,
};
use crate::verify::{self, Suite, SuiteReport};
use crate::walk::{HermitianSystem, MatrixFile};
use crate::windows::{make_window, WindowChoice, DEFAULT_BETA_MAX};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Success = 0,
    VerificationFailed = 1,
    Config = 2,
    GapPromise = 3,
    Infeasible = 4,
}

impl From<&Error> for ExitCode {
    fn from(e: &Error) -> Self {
        match e {
            Error::GapPromise(_) | Error::DegenerateGround(..) => ExitCode::GapPromise,
            Error::Infeasible(_) => ExitCode::Infeasible,
            _ => ExitCode::Config,
        }
    }
}

impl From<ExitCode> for std::process::ExitCode {
    fn from(c: ExitCode) -> Self {
        std::process::ExitCode::from(c as u8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "wqpe", version, about = "Window-assisted coherent phase estimation toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Commands,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the resolved run configuration here before running.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Window amplitudes and their overlap profile.
    Window(WindowConfig),
    /// Overlap profile with the contamination cutoff marked.
    Overlap(OverlapConfig),
    /// Exact end-to-end emulation on a small system.
    Emulate(EmulateConfig),
    /// Fault-tolerant resource estimates for the embedded systems.
    Estimate(EstimateConfig),
    /// Seeded randomized checks of the spectral lemmas and bounds.
    Verify(VerifyConfig),
    /// Replay a saved run configuration.
    Run {
        config: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    #[arg(long, default_value = "rect")]
    pub window: WindowChoice,
    #[arg(long)]
    pub n: u32,
    /// `m` used to pick beta for `kaiser:auto`.
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    /// Overlap samples on `[0, 1)`; defaults to `8 * 2^n`.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BETA_MAX)]
    pub beta_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct OverlapConfig {
    #[arg(long)]
    pub l: u32,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, default_value = "kaiser:auto")]
    pub window: WindowChoice,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_BETA_MAX)]
    pub beta_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct EmulateConfig {
    #[arg(long, default_value = "kaiser:auto")]
    pub window: WindowChoice,
    /// Total phase qubits; overrides `--l`.
    #[arg(long)]
    pub n: Option<u32>,
    /// Gap-resolving qubits; smallest admissible when omitted.
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long = "n-outer", default_value_t = 12)]
    pub n_outer: u32,
    #[arg(long, default_value_t = DEFAULT_BRANCH_FACTOR)]
    pub branch_factor: f64,
    /// Free constant of the error bound.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BETA_MAX)]
    pub beta_max: f64,
    /// Hamiltonian matrix file; a seeded random gapped one when omitted.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Observable: `identity`, `random` or a matrix file.
    #[arg(long, default_value = "random")]
    pub observable: String,
    /// Dimension of random systems.
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    /// Phase gap of the random Hamiltonian; 1.2x the promise threshold by default.
    #[arg(long)]
    pub gap: Option<f64>,
    /// Instead of one run, compare windows on this many seeded instances.
    #[arg(long)]
    pub paired: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    /// System name or `all`.
    #[arg(default_value = "all")]
    pub system: String,
    /// Observable name or `all`.
    #[arg(default_value = "all")]
    pub observable: String,
    /// Repeatable; rectangular and auto-Kaiser by default.
    #[arg(long = "window")]
    pub windows: Vec<WindowChoice>,
    /// Overrides the tabulated target accuracy.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Budget weights `inner,outer,data`.
    #[arg(long, default_value = "1,1,1")]
    pub split: Split,
    /// Cost model as inline JSON or a path to a JSON file.
    #[arg(long, value_parser = parse_costs)]
    pub costs: Option<CostModel>,
    #[arg(long, default_value_t = DEFAULT_BETA_MAX)]
    pub beta_max: f64,
    #[arg(long, default_value_t = resources::DEFAULT_M_CAP)]
    pub m_cap: u32,
    /// Fill `qubit_estimate` from a highwater model fit to the tables.
    #[arg(long)]
    pub highwater: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Instances per suite; suite defaults when omitted.
    #[arg(long)]
    pub count: Option<usize>,
}

/// Budget weights `inner,outer,data`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Split(pub [f64; 3]);

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("--split '{s}': {e}")))?;
        let w: [f64; 3] =
            parts.try_into().map_err(|_| Error::Config(format!("--split '{s}' needs three comma-separated weights")))?;
        if w.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::Config(format!("--split '{s}' weights must be positive")));
        }
        Ok(Split(w))
    }
}

fn parse_costs(s: &str) -> Result<CostModel> {
    if s.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(s)?);
    }
    let text = std::fs::read_to_string(s).map_err(|source| Error::Io { path: s.to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

/// A complete, replayable invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandConfig,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandConfig {
    Window(WindowConfig),
    Overlap(OverlapConfig),
    Emulate(EmulateConfig),
    Estimate(EstimateConfig),
    Verify(VerifyConfig),
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Command output plus whether verification passed.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub passed: bool,
}

impl Outcome {
    fn ok(bytes: Vec<u8>) -> Self {
        Outcome { bytes, passed: true }
    }
}

/// Full precision: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| Error::Io { path: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[derive(Serialize)]
struct WindowOutput {
    n: u32,
    window: String,
    amplitudes: Vec<f64>,
    overlap: Vec<(f64, f64)>,
}

pub fn cmd_window(cfg: &WindowConfig, format: Format) -> Result<Outcome> {
    let spec = cfg.window.spec_for(cfg.m, cfg.beta_max);
    let window = make_window(spec, cfg.n)?;
    let grid = cfg.grid.unwrap_or(8 * window.len());
    let profile = qpe::overlap_scan(&window, grid)?;
    let amplitudes = window.amplitudes().to_vec();
    let bytes = match format {
        Format::Json => json(&WindowOutput { n: cfg.n, window: spec.to_string(), amplitudes, overlap: profile.samples })?,
        Format::Csv => {
            let rows = (0..amplitudes.len().max(grid)).map(|i| {
                let (x, a) = match amplitudes.get(i) {
                    Some(a) => (i.to_string(), fmt_f64(*a)),
                    None => (String::new(), String::new()),
                };
                let (y, o) = match profile.samples.get(i) {
                    Some((y, o)) => (fmt_f64(*y), fmt_f64(*o)),
                    None => (String::new(), String::new()),
                };
                vec![x, a, y, o]
            });
            csv_bytes(&["x", "amplitude", "y", "overlap"], rows)?
        }
    };
    Ok(Outcome::ok(bytes))
}

#[derive(Serialize)]
struct OverlapOutput {
    l: u32,
    m: u32,
    window: String,
    /// Contamination region is `[cutoff, 1 - cutoff]`.
    cutoff: f64,
    max_contamination: f64,
    samples: Vec<(f64, f64)>,
}

pub fn cmd_overlap(cfg: &OverlapConfig, format: Format) -> Result<Outcome> {
    if cfg.l == 0 {
        return Err(Error::Config("--l must be at least 1".into()));
    }
    let n = cfg.l + cfg.m;
    let spec = cfg.window.spec_for(cfg.m, cfg.beta_max);
    let window = make_window(spec, n)?;
    let profile = qpe::overlap_scan(&window, cfg.grid)?;
    let cutoff = (-(cfg.l as f64)).exp2();
    let bytes = match format {
        Format::Json => json(&OverlapOutput {
            l: cfg.l,
            m: cfg.m,
            window: spec.to_string(),
            cutoff,
            max_contamination: qpe::max_contamination_overlap(&window, cfg.l)?,
            samples: profile.samples,
        })?,
        Format::Csv => {
            let rows = profile.samples.iter().map(|&(y, o)| {
                let contaminating = y >= cutoff && y <= 1.0 - cutoff;
                vec![fmt_f64(y), fmt_f64(o), contaminating.to_string()]
            });
            csv_bytes(&["y", "overlap", "contaminating"], rows)?
        }
    };
    Ok(Outcome::ok(bytes))
}

fn load_matrix(path: &Path) -> Result<HermitianSystem> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    let file: MatrixFile = serde_json::from_str(&text)?;
    file.to_system()
}

/// Resolves the Hamiltonian, observable and register sizes of an emulation.
pub fn emulation_inputs(cfg: &EmulateConfig, seed: u64) -> Result<(HermitianSystem, HermitianSystem, u32)> {
    let mut rng = instances::rng(seed);
    let l = match (cfg.n, cfg.l) {
        (Some(n), _) if n <= cfg.m => return Err(Error::Config(format!("--n {n} must exceed --m {}", cfg.m))),
        (Some(n), _) => Some(n - cfg.m),
        (None, l) => l,
    };
    let (h, l) = match &cfg.hamiltonian {
        Some(path) => {
            let h = load_matrix(path)?;
            let l = match l {
                Some(l) => l,
                None => emulator::min_gap_qubits(&h, cfg.m, 12)
                    .ok_or_else(|| Error::GapPromise(format!("{}: phase gap too small for l <= 12", path.display())))?,
            };
            (h, l)
        }
        None => {
            let l = l.unwrap_or(4);
            let gap = cfg.gap.unwrap_or_else(|| (1.2 * emulator::gap_threshold(l, cfg.m)).min(0.33));
            (instances::gapped_hamiltonian(&mut rng, cfg.dim, gap)?, l)
        }
    };
    let f = match cfg.observable.as_str() {
        "identity" => HermitianSystem::scaled_identity(h.dim(), 1.0)?,
        "random" => instances::random_observable(&mut rng, h.dim())?,
        path => load_matrix(Path::new(path))?,
    };
    if f.dim() != h.dim() {
        return Err(Error::Dimension { expected: h.dim(), found: f.dim() });
    }
    Ok((h, f, l))
}

fn emulation_params(cfg: &EmulateConfig) -> EmulationParams {
    EmulationParams { m: cfg.m, n_o: cfg.n_outer, c: cfg.c, branch_factor: cfg.branch_factor }
}

pub fn run_emulation(cfg: &EmulateConfig, seed: u64) -> Result<EmulationReport> {
    let (h, f, l) = emulation_inputs(cfg, seed)?;
    let window = make_window(cfg.window.spec_for(cfg.m, cfg.beta_max), l + cfg.m)?;
    emulator::run_algorithm(&window, &h, &f, &emulation_params(cfg))
}

const REPORT_HEADER: [&str; 8] =
    ["estimate", "truth", "realized_error", "p_learned", "p_true", "theta_measured", "bound", "success_flag"];

#[derive(Serialize)]
struct PairOutput {
    instances: usize,
    kaiser_wins: usize,
    win_fraction: f64,
    mean_kaiser_error: f64,
    mean_rectangular_error: f64,
    kaiser_errors: Vec<f64>,
    rectangular_errors: Vec<f64>,
}

/// Eigenvalue gap of the paired instances.
pub const PAIRED_EIGENVALUE_GAP: f64 = 0.2;

pub fn cmd_emulate(cfg: &EmulateConfig, seed: u64, format: Format) -> Result<Outcome> {
    if let Some(count) = cfg.paired {
        let s = verify::paired_window_comparison(seed, count, cfg.m, cfg.n_outer, PAIRED_EIGENVALUE_GAP)?;
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
        let bytes = match format {
            Format::Json => json(&PairOutput {
                instances: s.instances,
                kaiser_wins: s.kaiser_wins,
                win_fraction: s.win_fraction(),
                mean_kaiser_error: mean(&s.kaiser_errors),
                mean_rectangular_error: mean(&s.rectangular_errors),
                kaiser_errors: s.kaiser_errors,
                rectangular_errors: s.rectangular_errors,
            })?,
            Format::Csv => csv_bytes(
                &["index", "kaiser_error", "rectangular_error"],
                s.kaiser_errors
                    .iter()
                    .zip(&s.rectangular_errors)
                    .enumerate()
                    .map(|(i, (k, r))| vec![i.to_string(), fmt_f64(*k), fmt_f64(*r)]),
            )?,
        };
        return Ok(Outcome::ok(bytes));
    }
    let r = run_emulation(cfg, seed)?;
    let bytes = match format {
        Format::Json => json(&r)?,
        Format::Csv => {
            let row = [r.estimate, r.truth, r.realized_error, r.p_learned, r.p_true, r.theta_measured, r.bound]
                .iter()
                .map(|x| fmt_f64(*x))
                .chain([r.success_flag.to_string()])
                .collect();
            csv_bytes(&REPORT_HEADER, [row])?
        }
    };
    Ok(Outcome::ok(bytes))
}

fn selected_cases(tables: &Tables, system: &str, observable: &str) -> Result<Vec<SystemCase>> {
    let systems = match system {
        "all" => tables.systems.iter().collect(),
        name => vec![tables.system(name)?],
    };
    let observables = match observable {
        "all" => Observable::ALL.to_vec(),
        name => vec![name.parse()?],
    };
    let mut cases = Vec::new();
    for s in systems {
        for &o in &observables {
            if s.observables.contains_key(&o) || observable != "all" {
                cases.push(s.case(o)?);
            }
        }
    }
    Ok(cases)
}

/// Runs every selected (system, observable, window) estimate.
pub fn run_estimates(cfg: &EstimateConfig, tables: &Tables) -> Result<Vec<ResourceCase>> {
    let cases = selected_cases(tables, &cfg.system, &cfg.observable)?;
    let windows = if cfg.windows.is_empty() {
        vec![WindowChoice::Rectangular, WindowChoice::KaiserAuto]
    } else {
        cfg.windows.clone()
    };
    let costs = cfg.costs.unwrap_or_default();
    let options = EstimateOptions { beta_max: cfg.beta_max, m_cap: cfg.m_cap };
    let coefficients: Option<HighwaterCoefficients> = if cfg.highwater {
        Some(resources::fit_highwater(tables, &costs, &options)?.coefficients)
    } else {
        None
    };
    let jobs: Vec<(SystemCase, WindowChoice)> =
        cases.iter().flat_map(|c| windows.iter().map(move |w| (c.clone(), *w))).collect();
    jobs.par_iter()
        .map(|(case, window)| {
            let target = match cfg.epsilon {
                Some(e) => e,
                None => tables.epsilon_target(case.observable)?,
            };
            let budget = ErrorBudget::split(target, cfg.split.0)?;
            resources::estimate_case(case, &budget, *window, &costs, &options, coefficients.as_ref())
        })
        .collect()
}

pub fn cmd_estimate(cfg: &EstimateConfig, format: Format) -> Result<Outcome> {
    let tables = Tables::load()?;
    let results = run_estimates(cfg, &tables)?;
    let bytes = match format {
        Format::Json => json(&results)?,
        Format::Csv => csv_bytes(&resources::CSV_HEADER, results.iter().map(|r| r.csv_record().to_vec()))?,
    };
    Ok(Outcome::ok(bytes))
}

/// Instance count used when `--count` is omitted.
pub fn default_count(suite: Suite) -> usize {
    match suite {
        Suite::Lemma1 | Suite::Xmatrix => 50,
        Suite::Theorem1 => 25,
        Suite::Lemma2 | Suite::DavisKahan => 100,
        Suite::Bounds => 200,
        Suite::Orthonormality => 20,
    }
}

pub fn run_verify(cfg: &VerifyConfig, seed: u64) -> Result<Vec<SuiteReport>> {
    verify::parse_suites(&cfg.suite)?
        .into_iter()
        .map(|s| verify::run(s, seed, cfg.count.unwrap_or_else(|| default_count(s))))
        .collect()
}

pub fn cmd_verify(cfg: &VerifyConfig, seed: u64, format: Format) -> Result<Outcome> {
    let reports = run_verify(cfg, seed)?;
    let passed = reports.iter().all(SuiteReport::passed);
    for r in &reports {
        eprintln!("{}: checked {}, skipped {}, violations {}", r.suite, r.checked, r.skipped, r.violations.len());
        for v in &r.violations {
            eprintln!("{}", serde_json::to_string(v)?);
        }
    }
    let bytes = match format {
        Format::Json => json(&reports)?,
        Format::Csv => csv_bytes(
            &["suite", "checked", "skipped", "violations"],
            reports.iter().map(|r| {
                vec![r.suite.to_string(), r.checked.to_string(), r.skipped.to_string(), r.violations.len().to_string()]
            }),
        )?,
    };
    Ok(Outcome { bytes, passed })
}

/// Executes a configuration and writes its output.
pub fn execute(cfg: &RunConfig) -> Result<bool> {
    let outcome = match &cfg.command {
        CommandConfig::Window(c) => cmd_window(c, cfg.format)?,
        CommandConfig::Overlap(c) => cmd_overlap(c, cfg.format)?,
        CommandConfig::Emulate(c) => cmd_emulate(c, cfg.seed, cfg.format)?,
        CommandConfig::Estimate(c) => cmd_estimate(c, cfg.format)?,
        CommandConfig::Verify(c) => cmd_verify(c, cfg.seed, cfg.format)?,
    };
    match &cfg.out {
        Some(path) => write_atomic(path, &outcome.bytes)?,
        None => std::io::stdout()
            .write_all(&outcome.bytes)
            .map_err(|source| Error::Io { path: "<stdout>".into(), source })?,
    }
    Ok(outcome.passed)
}

impl Cli {
    pub fn into_config(self) -> Result<(RunConfig, Option<PathBuf>)> {
        let command = match self.command {
            Commands::Window(c) => CommandConfig::Window(c),
            Commands::Overlap(c) => CommandConfig::Overlap(c),
            Commands::Emulate(c) => CommandConfig::Emulate(c),
            Commands::Estimate(c) => CommandConfig::Estimate(c),
            Commands::Verify(c) => CommandConfig::Verify(c),
            Commands::Run { config } => return Ok((RunConfig::load(&config)?, self.save_config)),
        };
        Ok((RunConfig { command, seed: self.seed, out: self.out, format: self.format }, self.save_config))
    }
}

fn run_cli(cli: Cli) -> Result<bool> {
    let (cfg, save) = cli.into_config()?;
    if let Some(path) = save {
        write_atomic(&path, &json(&cfg)?)?;
    }
    execute(&cfg)
}

/// Parses `args` and runs the command, reporting errors on stderr.
pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::Config } else { ExitCode::Success };
        }
    };
    match run_cli(cli) {
        Ok(true) => ExitCode::Success,
        Ok(false) => ExitCode::VerificationFailed,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(&e)
        }
    }
}

pub fn main() -> std::process::ExitCode {
    run_from(std::env::args_os()).into()
}
