//! `freiman`: analysis and Monte Carlo experiments on Freiman homomorphisms.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use freiman_core::connectivity::Connectivity;
use freiman_core::experiments::{
    hitting_csv, read_hom_file, run_analyze, run_extract, run_hitting_time, run_threshold_scan, scan_csv,
    AnalyzeOptions, ExperimentConfig, HittingConfig, OutputFormat, ScanConfig,
};
use freiman_core::fuzzy::ExtractOptions;
use freiman_core::sets::{sample_binomial, SubsetSample};
use freiman_core::Error;

#[derive(Parser)]
#[command(name = "freiman", version, about = "Freiman homomorphisms and random-set experiments on finite Abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report quadruples, dimension, connectivity, rigidity and diagnostics of one set.
    Analyze(Flags),
    /// Threshold scan over a grid of C values.
    Scan(Flags),
    /// Hitting times of isolation-freeness and Freiman dimension 0.
    Hitting(Flags),
    /// Recover an affine map from homomorphism values on a set.
    Extract(Flags),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Default)]
struct Flags {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Group as comma-separated cyclic factors, e.g. `4,9`.
    #[arg(long)]
    group: Option<String>,
    /// Shorthand for the cyclic group of order n.
    #[arg(long)]
    n: Option<u32>,
    /// Scan constant; repeat for a grid.
    #[arg(long = "C")]
    c: Vec<f64>,
    /// Fixed inclusion probability (overrides the C grid).
    #[arg(long)]
    p: Option<f64>,
    /// Trials per grid point or hitting runs (default 100)
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed (default 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Largest isolated subset searched by the connectivity test.
    #[arg(long)]
    wmax: Option<usize>,
    /// Exact rational rank instead of two-prime modular rank.
    #[arg(long)]
    exact_rank: bool,
    /// Set file: `group=<factors>` then one element index per line.
    #[arg(long)]
    set: Option<PathBuf>,
    /// Homomorphism value file: `target=<factors>` then `<element> <value>` lines.
    #[arg(long)]
    hom: Option<PathBuf>,
    /// Mass threshold for reading off gamma.
    #[arg(long)]
    threshold: Option<f64>,
    /// Connectivity parameter.
    #[arg(long)]
    eta: Option<f64>,
    /// Decide universal rigidity for sets up to this size.
    #[arg(long)]
    rigidity_bound: Option<usize>,
    /// Random theta arguments for large groups.
    #[arg(long)]
    theta_sample: Option<usize>,
    /// Exit with code 3 when the connectivity search is inconclusive.
    #[arg(long)]
    require_verdict: bool,
    /// Check every insertion of a hitting run against enumeration from scratch.
    #[arg(long)]
    shadow: bool,
}

impl Flags {
    fn config(&self) -> anyhow::Result<ExperimentConfig> {
        let flags = ExperimentConfig {
            group: self.group.clone(),
            n: self.n,
            c: Some(self.c.clone()),
            p: self.p,
            trials: self.trials,
            seed: self.seed,
            out: self.out.clone(),
            format: self.format.map(|f| match f {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            }),
            wmax: self.wmax,
            exact_rank: self.exact_rank.then_some(true),
            set: self.set.clone(),
            hom: self.hom.clone(),
            threshold: self.threshold,
            eta: self.eta,
            rigidity_bound: self.rigidity_bound,
            theta_sample: self.theta_sample,
        };
        let base = match &self.config {
            Some(path) => ExperimentConfig::read(path)
                .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?,
            None => ExperimentConfig::default(),
        };
        Ok(flags.over(base))
    }
}

/// Failures that carry their own exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Cap(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Cap(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for Failure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(f) = err.downcast_ref::<Failure>() {
        return match f {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
        };
    }
    match err.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. }) => 3,
        Some(Error::InvalidParameter(_)) | Some(Error::InvalidProbability(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Analyze(f) => analyze(&f),
        Command::Scan(f) => scan(&f),
        Command::Hitting(f) => hitting(&f),
        Command::Extract(f) => extract(&f),
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json_only(cfg: &ExperimentConfig, command: &str) -> anyhow::Result<()> {
    if cfg.format == Some(OutputFormat::Csv) {
        return Err(Failure::Usage(format!("{command} emits JSON only")).into());
    }
    Ok(())
}

fn pretty<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn read_set(path: &Path) -> anyhow::Result<SubsetSample> {
    SubsetSample::read_set_file(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())).into())
}

fn analyze(f: &Flags) -> anyhow::Result<()> {
    let cfg = f.config()?;
    json_only(&cfg, "analyze")?;
    let set = match &cfg.set {
        Some(path) => {
            let set = read_set(path)?;
            if cfg.group.is_some() || cfg.n.is_some() {
                let g = cfg.resolve_group()?;
                if &g != set.group() {
                    return Err(Failure::Input(format!("set file group {} differs from {g}", set.group())).into());
                }
            }
            set
        }
        None => {
            let g = cfg.resolve_group()?;
            let p = cfg.p.ok_or_else(|| Failure::Usage("analyze needs --set or a group with --p".into()))?;
            sample_binomial(&g, p, cfg.seed())?
        }
    };
    let mut opts = AnalyzeOptions { eta: cfg.eta()?, exact_rank: cfg.exact_rank.unwrap_or(false), ..Default::default() };
    if let Some(w) = cfg.wmax {
        opts.w_max = w;
    }
    if let Some(r) = cfg.rigidity_bound {
        opts.rigidity_limit = r;
    }
    let report = run_analyze(&set, &opts)?;
    emit(cfg.out.as_deref(), &pretty(&report)?)?;
    if f.require_verdict {
        if let Connectivity::Inconclusive { searched } = report.connectivity.result {
            return Err(Failure::Cap(format!("connectivity inconclusive: searched subsets up to size {searched}")).into());
        }
    }
    Ok(())
}

fn scan(f: &Flags) -> anyhow::Result<()> {
    let cfg = f.config()?;
    let scan = ScanConfig {
        group: cfg.resolve_group()?,
        c_grid: cfg.c.clone().unwrap_or_default(),
        p_override: cfg.p,
        trials: cfg.trials()?,
        seed: cfg.seed(),
        exact_rank: cfg.exact_rank.unwrap_or(false),
        rigidity_limit: cfg.rigidity_bound.unwrap_or(0),
    };
    let rows = run_threshold_scan(&scan)?;
    let text = match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => scan_csv(&rows),
        OutputFormat::Json => pretty(&rows)?,
    };
    emit(cfg.out.as_deref(), &text)
}

fn hitting(f: &Flags) -> anyhow::Result<()> {
    let cfg = f.config()?;
    let run = HittingConfig { group: cfg.resolve_group()?, trials: cfg.trials()?, seed: cfg.seed(), shadow: f.shadow };
    let records = run_hitting_time(&run)?;
    let text = match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => hitting_csv(&records),
        OutputFormat::Json => pretty(&records)?,
    };
    emit(cfg.out.as_deref(), &text)
}

fn extract(f: &Flags) -> anyhow::Result<()> {
    let cfg = f.config()?;
    json_only(&cfg, "extract")?;
    let set_path = cfg.set.as_deref().ok_or_else(|| Failure::Usage("extract needs --set".into()))?;
    let hom_path = cfg.hom.as_deref().ok_or_else(|| Failure::Usage("extract needs --hom".into()))?;
    let set = read_set(set_path)?;
    let (target, phi) =
        read_hom_file(hom_path).map_err(|e| Failure::Input(format!("{}: {e}", hom_path.display())))?;
    let mut opts = ExtractOptions { threshold: cfg.threshold()?, seed: cfg.seed(), ..Default::default() };
    if let Some(s) = cfg.theta_sample {
        opts.sample = s;
    }
    let report = run_extract(&set, &target, &phi, &opts)?;
    emit(cfg.out.as_deref(), &pretty(&report)?)
}
