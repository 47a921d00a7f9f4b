//! Command-line front end. Exit codes: 0 success, 2 configuration error, 1 runtime error.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use config::{Command, RunConfig};

use crate::coherence::analytic_mean;
use crate::disorder::{DisorderSpec, Target};
use crate::experiments::{self, ConditionalSpec, PAPER_CONFIGS, PAPER_POOL, PAPER_STATES};
use crate::quadrature::{self, QuadratureConfig};
use crate::sampling::Family;
use crate::states::Field;
use crate::statistics::fit_exponential;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) if m.starts_with("error:") => f.write_str(m.trim_end()),
            CliError::Config(m) => write!(f, "error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "haar-coherence",
    version,
    about = "Coherence statistics of Haar-random pure states under quenched disorder"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Ordered (disorder-free) coherence distribution.
    Typical(TypicalArgs),
    /// Quenched-disorder coherence distribution.
    Disorder(DisorderArgs),
    /// Dimension sweep with exponential fits of std and skewness.
    SweepDim(SweepDimArgs),
    /// Gaussian disorder strength sweep.
    SweepStrength(SweepStrengthArgs),
    /// Disorder applied to qubits of fixed coherence.
    Conditional(ConditionalArgs),
    /// Analytic averages and the redit quadrature cross-check.
    Analytic(AnalyticArgs),
    /// Fit α e^{−βd} + γ to `d,y` points from a CSV file.
    Fit(FitArgs),
}

fn count_arg(s: &str) -> Result<usize, String> {
    config::parse_count(s).ok_or_else(|| format!("`{s}` is not a count"))
}

fn dims_arg(s: &str) -> Result<DimList, String> {
    config::parse_dims(s).map(DimList)
}

fn floats_arg(s: &str) -> Result<FloatList, String> {
    config::parse_floats(s)
        .map(FloatList)
        .ok_or_else(|| format!("`{s}` is not a comma-separated number list"))
}

fn field_arg(s: &str) -> Result<Field, String> {
    Field::parse(s).ok_or_else(|| format!("`{s}` is not one of real, complex"))
}

fn family_arg(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| format!("`{s}` is not one of gaussian, uniform, cauchy"))
}

fn target_arg(s: &str) -> Result<Target, String> {
    Target::parse(s).ok_or_else(|| format!("`{s}` is not one of real, imag, both"))
}

#[derive(Debug, Clone)]
struct DimList(Vec<usize>);

#[derive(Debug, Clone)]
struct FloatList(Vec<f64>);

#[derive(Debug, Args)]
struct Common {
    /// Master seed (falls back to $HAAR_COHERENCE_SEED, then 1).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; never changes results.
    #[arg(long)]
    workers: Option<usize>,
    /// Flat `key = value` config file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Ensemble {
    #[arg(long, value_parser = field_arg)]
    field: Option<Field>,
    /// Number of base states (accepts 1e6).
    #[arg(long, value_parser = count_arg)]
    n: Option<usize>,
    /// N = 1e6, M = 100, pool = 1e7 unless given explicitly.
    #[arg(long)]
    paper_scale: bool,
}

#[derive(Debug, Args)]
struct Disorder {
    #[arg(long, value_parser = family_arg)]
    family: Option<Family>,
    #[arg(long, value_parser = target_arg)]
    target: Option<Target>,
    /// Disorder configurations per base state.
    #[arg(long, value_parser = count_arg)]
    m: Option<usize>,
}

#[derive(Debug, Args)]
struct TypicalArgs {
    /// Dimension, or a list/range such as `2..7`.
    #[arg(long, value_parser = dims_arg)]
    dim: Option<DimList>,
    #[command(flatten)]
    ensemble: Ensemble,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct DisorderArgs {
    #[arg(long, value_parser = dims_arg)]
    dim: Option<DimList>,
    /// Semi-interquartile range of the disorder.
    #[arg(long, value_parser = floats_arg, allow_negative_numbers = true)]
    gamma: Option<FloatList>,
    #[command(flatten)]
    disorder: Disorder,
    #[command(flatten)]
    ensemble: Ensemble,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepDimArgs {
    #[arg(long, value_parser = dims_arg)]
    dims: Option<DimList>,
    #[command(flatten)]
    ensemble: Ensemble,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepStrengthArgs {
    #[arg(long, value_parser = dims_arg)]
    dim: Option<DimList>,
    #[arg(long, value_parser = floats_arg, allow_negative_numbers = true)]
    gammas: Option<FloatList>,
    #[arg(long, value_parser = count_arg)]
    m: Option<usize>,
    #[command(flatten)]
    ensemble: Ensemble,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ConditionalArgs {
    /// Window centres M_in.
    #[arg(long = "m-in", value_parser = floats_arg, allow_negative_numbers = true)]
    m_in: Option<FloatList>,
    #[arg(long, allow_negative_numbers = true)]
    window: Option<f64>,
    /// Haar qubits screened per window.
    #[arg(long, value_parser = count_arg)]
    pool: Option<usize>,
    #[arg(long, value_parser = floats_arg, allow_negative_numbers = true)]
    gamma: Option<FloatList>,
    #[command(flatten)]
    disorder: Disorder,
    #[arg(long)]
    paper_scale: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct AnalyticArgs {
    #[arg(long, value_parser = field_arg)]
    field: Option<Field>,
    #[arg(long, value_parser = dims_arg)]
    dims: Option<DimList>,
    /// Gauss-Legendre nodes per axis.
    #[arg(long)]
    nodes: Option<usize>,
    /// Permit the ~1e9-point d = 7 quadrature.
    #[arg(long)]
    allow_d7: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// CSV with `d,y` rows.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

impl Sub {
    fn command(&self) -> Command {
        match self {
            Sub::Typical(_) => Command::Typical,
            Sub::Disorder(_) => Command::Disorder,
            Sub::SweepDim(_) => Command::SweepDim,
            Sub::SweepStrength(_) => Command::SweepStrength,
            Sub::Conditional(_) => Command::Conditional,
            Sub::Analytic(_) => Command::Analytic,
            Sub::Fit(_) => Command::Fit,
        }
    }

    fn common(&self) -> &Common {
        match self {
            Sub::Typical(a) => &a.common,
            Sub::Disorder(a) => &a.common,
            Sub::SweepDim(a) => &a.common,
            Sub::SweepStrength(a) => &a.common,
            Sub::Conditional(a) => &a.common,
            Sub::Analytic(a) => &a.common,
            Sub::Fit(a) => &a.common,
        }
    }

    fn paper_scale(&self) -> bool {
        match self {
            Sub::Typical(a) => a.ensemble.paper_scale,
            Sub::Disorder(a) => a.ensemble.paper_scale,
            Sub::SweepDim(a) => a.ensemble.paper_scale,
            Sub::SweepStrength(a) => a.ensemble.paper_scale,
            Sub::Conditional(a) => a.paper_scale,
            Sub::Analytic(_) | Sub::Fit(_) => false,
        }
    }

    /// Overlays the explicitly given flags on `cfg`.
    fn apply(self, cfg: &mut RunConfig) {
        fn set<T>(slot: &mut T, v: Option<T>) {
            if let Some(v) = v {
                *slot = v;
            }
        }
        fn ensemble(cfg: &mut RunConfig, e: Ensemble) {
            set(&mut cfg.field, e.field);
            set(&mut cfg.n_states, e.n);
        }
        fn disorder(cfg: &mut RunConfig, d: Disorder) {
            set(&mut cfg.family, d.family);
            set(&mut cfg.target, d.target);
            set(&mut cfg.configs_per_state, d.m);
        }
        let common = match self {
            Sub::Typical(a) => {
                set(&mut cfg.dims, a.dim.map(|d| d.0));
                ensemble(cfg, a.ensemble);
                a.common
            }
            Sub::Disorder(a) => {
                set(&mut cfg.dims, a.dim.map(|d| d.0));
                set(&mut cfg.gammas, a.gamma.map(|g| g.0));
                disorder(cfg, a.disorder);
                ensemble(cfg, a.ensemble);
                a.common
            }
            Sub::SweepDim(a) => {
                set(&mut cfg.dims, a.dims.map(|d| d.0));
                ensemble(cfg, a.ensemble);
                a.common
            }
            Sub::SweepStrength(a) => {
                set(&mut cfg.dims, a.dim.map(|d| d.0));
                set(&mut cfg.gammas, a.gammas.map(|g| g.0));
                set(&mut cfg.configs_per_state, a.m);
                ensemble(cfg, a.ensemble);
                a.common
            }
            Sub::Conditional(a) => {
                set(&mut cfg.m_in, a.m_in.map(|m| m.0));
                set(&mut cfg.window, a.window);
                set(&mut cfg.pool, a.pool);
                set(&mut cfg.gammas, a.gamma.map(|g| g.0));
                disorder(cfg, a.disorder);
                a.common
            }
            Sub::Analytic(a) => {
                set(&mut cfg.field, a.field);
                set(&mut cfg.dims, a.dims.map(|d| d.0));
                set(&mut cfg.nodes, a.nodes);
                cfg.allow_dim7 |= a.allow_d7;
                a.common
            }
            Sub::Fit(a) => {
                if a.input.is_some() {
                    cfg.input = a.input;
                }
                a.common
            }
        };
        set(&mut cfg.seed, common.seed);
        set(&mut cfg.out, common.out);
        set(&mut cfg.workers, common.workers);
    }
}

/// Parses argv (program name first) into a merged, validated configuration.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Config(e.to_string())
        }
        _ => CliError::Config(e.render().to_string()),
    })?;
    let sub = cli.command;
    let command = sub.command();
    let mut cfg = match &sub.common().config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("--config: cannot read {}: {e}", path.display()))
            })?;
            RunConfig::from_config_str(&text, Some(command)).map_err(CliError::Config)?
        }
        None => RunConfig::defaults(command),
    };
    if cfg.command != command {
        return Err(CliError::Config(format!(
            "--config: file is for `{}`, not `{}`",
            cfg.command.name(),
            command.name()
        )));
    }
    if sub.paper_scale() {
        cfg.n_states = PAPER_STATES;
        cfg.configs_per_state = PAPER_CONFIGS;
        cfg.pool = PAPER_POOL;
    }
    sub.apply(&mut cfg);
    validate(&cfg).map_err(CliError::Config)?;
    Ok(cfg)
}

/// Range checks; every message starts with the offending flag.
pub fn validate(cfg: &RunConfig) -> Result<(), String> {
    let dim_flag = match cfg.command {
        Command::SweepDim | Command::Analytic => "--dims",
        _ => "--dim",
    };
    let uses_dims = !matches!(cfg.command, Command::Conditional | Command::Fit);
    if uses_dims {
        if cfg.dims.is_empty() {
            return Err(format!("{dim_flag}: at least one dimension is required"));
        }
        if let Some(&d) = cfg.dims.iter().find(|&&d| d < 2) {
            return Err(format!("{dim_flag}: dim must be ≥ 2 (got {d})"));
        }
    }
    match cfg.command {
        Command::SweepDim => {
            if let Some(&d) = cfg.dims.iter().find(|&&d| d > 10) {
                return Err(format!("--dims: sweep dimensions must be ≤ 10 (got {d})"));
            }
        }
        Command::Analytic => {
            if let Some(&d) = cfg
                .dims
                .iter()
                .find(|&&d| d > quadrature::MAX_DIM && cfg.field == Field::Real)
            {
                return Err(format!(
                    "--dims: redit quadrature supports d ≤ {} (got {d})",
                    quadrature::MAX_DIM
                ));
            }
            if cfg.field == Field::Real
                && cfg.dims.contains(&quadrature::MAX_DIM)
                && !cfg.allow_dim7
            {
                return Err("--dims: d = 7 quadrature needs --allow-d7".into());
            }
            if cfg.nodes < 4 {
                return Err(format!("--nodes: must be ≥ 4 (got {})", cfg.nodes));
            }
        }
        _ => {}
    }
    let ensemble = matches!(
        cfg.command,
        Command::Typical | Command::Disorder | Command::SweepDim | Command::SweepStrength
    );
    if ensemble && cfg.n_states < experiments::MIN_STATES {
        return Err(format!(
            "--n: must be ≥ {} (got {})",
            experiments::MIN_STATES,
            cfg.n_states
        ));
    }
    let disordered = matches!(
        cfg.command,
        Command::Disorder | Command::SweepStrength | Command::Conditional
    );
    if disordered {
        let flag = if cfg.command == Command::SweepStrength {
            "--gammas"
        } else {
            "--gamma"
        };
        if cfg.gammas.is_empty() {
            return Err(format!("{flag}: at least one value is required"));
        }
        if let Some(g) = cfg.gammas.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
            return Err(format!("{flag}: must be positive (got {g})"));
        }
        if cfg.configs_per_state == 0 {
            return Err("--m: must be ≥ 1".into());
        }
        if cfg.field == Field::Real
            && cfg.target != Target::RealParts
            && cfg.command != Command::Conditional
        {
            return Err(format!(
                "--target: `{}` is unavailable for real-field states",
                cfg.target
            ));
        }
    }
    if cfg.command == Command::Conditional {
        if cfg.m_in.is_empty() {
            return Err("--m-in: at least one value is required".into());
        }
        for &m in &cfg.m_in {
            let spec = ConditionalSpec {
                m_in: m,
                window_halfwidth: cfg.window,
                base_pool: cfg.pool,
            };
            spec.validate().map_err(|e| format!("--m-in: {e}"))?;
        }
    }
    if cfg.command == Command::Fit && cfg.input.is_none() {
        return Err("--input: a `d,y` CSV file is required".into());
    }
    Ok(())
}

fn manifest(cfg: &RunConfig, wall: f64, files: &[String]) -> String {
    format!(
        "{}version = {}\nwall_time_s = {wall:.3}\nfiles = {}\n",
        cfg.to_config_string(),
        env!("CARGO_PKG_VERSION"),
        files.join(",")
    )
}

struct Outputs<'a> {
    cfg: &'a RunConfig,
    files: Vec<String>,
}

impl<'a> Outputs<'a> {
    fn put(&mut self, name: String, contents: &str) -> Result<(), CliError> {
        output::write(&self.cfg.out, &name, contents).map_err(|e| {
            CliError::Runtime(format!(
                "writing {}: {e}",
                self.cfg.out.join(&name).display()
            ))
        })?;
        self.files.push(name);
        Ok(())
    }
}

/// Executes a validated configuration; returns the text printed to stdout.
pub fn execute(cfg: &RunConfig) -> Result<String, CliError> {
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(runtime)?;
    let mut out = Outputs {
        cfg,
        files: Vec::new(),
    };
    let stdout = pool.install(|| run_command(cfg, &mut out))?;
    let wall = started.elapsed().as_secs_f64();
    let files = out.files.clone();
    out.put("manifest.txt".into(), &manifest(cfg, wall, &files))?;
    Ok(stdout)
}

fn disorder_spec(cfg: &RunConfig, gamma: f64) -> Result<DisorderSpec, CliError> {
    DisorderSpec::new(cfg.family, gamma, cfg.target, cfg.configs_per_state)
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run_command(cfg: &RunConfig, out: &mut Outputs<'_>) -> Result<String, CliError> {
    use output::*;
    match cfg.command {
        Command::Typical => {
            let mut reports = Vec::new();
            for &d in &cfg.dims {
                let r = experiments::run_typical(d, cfg.field, cfg.n_states, cfg.seed)
                    .map_err(runtime)?;
                out.put(
                    format!("hist_d{d}_{}.csv", cfg.field),
                    &histogram_csv(&r.frequencies),
                )?;
                reports.push(r);
            }
            let summary = summary_csv(&reports);
            out.put("summary.csv".into(), &summary)?;
            Ok(summary)
        }
        Command::Disorder => {
            let mut reports = Vec::new();
            for &d in &cfg.dims {
                for &g in &cfg.gammas {
                    let spec = disorder_spec(cfg, g)?;
                    let r =
                        experiments::run_disordered(d, cfg.field, cfg.n_states, &spec, cfg.seed)
                            .map_err(runtime)?;
                    out.put(
                        format!(
                            "hist_d{d}_{}_{}_{}_g{}.csv",
                            cfg.field,
                            cfg.family,
                            cfg.target,
                            tag(g)
                        ),
                        &histogram_csv(&r.frequencies),
                    )?;
                    reports.push(r);
                }
            }
            let summary = summary_csv(&reports);
            out.put("summary.csv".into(), &summary)?;
            Ok(summary)
        }
        Command::SweepDim => {
            let sweep =
                experiments::run_dimension_sweep(cfg.field, &cfg.dims, cfg.n_states, cfg.seed)
                    .map_err(runtime)?;
            for r in &sweep.reports {
                out.put(
                    format!("hist_d{}_{}.csv", r.config.dim, cfg.field),
                    &histogram_csv(&r.frequencies),
                )?;
            }
            let summary = summary_csv(&sweep.reports);
            out.put("summary.csv".into(), &summary)?;
            let fits = fit_csv(&[
                ("std", sweep.fit_std.as_ref()),
                ("skewness", sweep.fit_skew.as_ref()),
            ]);
            out.put("fit.csv".into(), &fits)?;
            out.put(
                "unnormalized.csv".into(),
                &unnormalized_csv(&sweep.unnormalized),
            )?;
            let note = if sweep.fit_std.is_none() {
                "fit skipped: fewer than 4 dimensions\n"
            } else {
                ""
            };
            Ok(format!("{summary}\n{fits}{note}"))
        }
        Command::SweepStrength => {
            let mut reports = Vec::new();
            for &d in &cfg.dims {
                let ordered = experiments::run_typical(d, cfg.field, cfg.n_states, cfg.seed)
                    .map_err(runtime)?;
                out.put(
                    format!("hist_d{d}_{}.csv", cfg.field),
                    &histogram_csv(&ordered.frequencies),
                )?;
                reports.push(ordered);
                let sweep = experiments::run_strength_sweep(
                    d,
                    cfg.field,
                    cfg.n_states,
                    &cfg.gammas,
                    cfg.configs_per_state,
                    cfg.seed,
                )
                .map_err(runtime)?;
                for (r, g) in sweep.iter().zip(&cfg.gammas) {
                    out.put(
                        format!("hist_d{d}_{}_gaussian_real_g{}.csv", cfg.field, tag(*g)),
                        &histogram_csv(&r.frequencies),
                    )?;
                }
                reports.extend(sweep);
            }
            let summary = summary_csv(&reports);
            out.put("summary.csv".into(), &summary)?;
            Ok(summary)
        }
        Command::Conditional => {
            let spec = disorder_spec(cfg, cfg.gammas[0])?;
            let mut rows = Vec::new();
            for &m in &cfg.m_in {
                let cond = ConditionalSpec {
                    m_in: m,
                    window_halfwidth: cfg.window,
                    base_pool: cfg.pool,
                };
                let r = experiments::run_conditional(&cond, &spec, cfg.seed).map_err(runtime)?;
                out.put(
                    format!("hist_conditional_m{}.csv", tag(m)),
                    &histogram_csv(&r.frequencies),
                )?;
                rows.push(r);
            }
            let table = conditional_csv(&rows);
            out.put("conditional.csv".into(), &table)?;
            Ok(table)
        }
        Command::Analytic => {
            let mut s = String::from(ANALYTIC_HEADER);
            s.push('\n');
            for &d in &cfg.dims {
                let exact: f64 = analytic_mean(d, cfg.field);
                let quad = match cfg.field {
                    Field::Real => {
                        let q = QuadratureConfig {
                            dim: d,
                            nodes_per_axis: cfg.nodes,
                            allow_dim7: cfg.allow_dim7,
                        };
                        num(quadrature::average_redit_coherence::<f64>(&q).map_err(runtime)?)
                    }
                    Field::Complex => String::new(),
                };
                s.push_str(&format!("{d},{},{},{quad}\n", cfg.field, num(exact)));
            }
            out.put("analytic.csv".into(), &s)?;
            Ok(s)
        }
        Command::Fit => {
            let path = cfg.input.as_ref().expect("validated");
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Runtime(format!("reading {}: {e}", path.display())))?;
            let points = read_points(&text)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
            let fit = fit_exponential(&points).map_err(runtime)?;
            let csv = fit_csv(&[("y", Some(&fit))]);
            out.put("fit.csv".into(), &csv)?;
            Ok(csv)
        }
    }
}

/// Entry point used by the binary; prints results or the error and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let help = args
        .iter()
        .skip(1)
        .any(|a| a == "--help" || a == "-h" || a == "--version" || a == "-V" || a == "help");
    let cfg = match parse_config(args) {
        Ok(cfg) => cfg,
        Err(CliError::Config(msg)) if help => {
            print!("{msg}");
            return EXIT_OK;
        }
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    match execute(&cfg) {
        Ok(text) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
