//! `xg` command-line driver. Each subcommand reads shots (a canonical CSV or
//! a StatsBomb open-data directory), runs one stage of the pipeline and
//! writes its CSV/JSON outputs plus a `manifest.json` into `--out`.
//!
//! Exit codes: 0 success, 1 validation or usage error, 2 runtime failure.

pub mod commands;
pub mod config;
pub mod manifest;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{BaselineKind, GroupingKind, Method, ModelKind, PriorSetArg, RunConfig};

/// Bad user input: flags, config values or a combination of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError(pub String);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ValidationError {}

#[derive(Debug, Parser)]
#[command(name = "xg", version, about = "Expected-goals models on StatsBomb open data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract open-play shots into raw_shots.csv.
    Ingest(CommonArgs),
    /// Engineer predictors into the canonical shots.csv.
    Features {
        #[command(flatten)]
        common: CommonArgs,
        /// Raw shots CSV written by `ingest`; read instead of --data-dir.
        #[arg(long)]
        raw: Option<PathBuf>,
    },
    /// Fit a frequentist or Bayesian xG model.
    Fit(CommonArgs),
    /// Hierarchical minus single-level predictions per shot, group and bin.
    Adjustments(CommonArgs),
    /// Positional model adjustments against the Bayes-theorem adjustments.
    ValidateBayes(CommonArgs),
    /// Conversion rates of players with enough shots.
    Players(CommonArgs),
    /// Goals, baseline xG and adjusted xG of the selected players.
    Totals(CommonArgs),
    /// Extended single-level fits under each named prior set.
    PriorSensitivity {
        #[command(flatten)]
        common: CommonArgs,
        /// Prior sets to run; all six when omitted.
        #[arg(long, value_enum, value_delimiter = ',')]
        sets: Vec<PriorSetArg>,
    },
    /// In-sample scores of frequentist fits adding one feature at a time.
    FeatureSweep(CommonArgs),
    /// Generate synthetic shots from a known truth.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// StatsBomb open-data root.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Canonical shots CSV, used instead of --data-dir.
    #[arg(long)]
    pub shots: Option<PathBuf>,
    /// Comma-separated competition ids.
    #[arg(long, value_delimiter = ',')]
    pub competitions: Option<Vec<u32>>,
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long, value_enum)]
    pub grouping: Option<GroupingKind>,
    /// Comma-separated player names for player grouping.
    #[arg(long, value_delimiter = ',')]
    pub players: Option<Vec<String>>,
    #[arg(long, value_enum)]
    pub prior_set: Option<PriorSetArg>,
    #[arg(long, value_enum)]
    pub baseline: Option<BaselineKind>,
    #[arg(long)]
    pub chains: Option<usize>,
    /// Iterations per chain, warmup included.
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub warmup: Option<usize>,
    #[arg(long)]
    pub target_accept: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub min_shots: Option<usize>,
    /// Fit on a random subset of this many shots.
    #[arg(long)]
    pub subsample: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    /// Loads `--config` (or defaults) and applies the flags on top.
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($flag:ident => $field:expr),* $(,)?) => {
                $(if let Some(v) = &self.$flag { $field = v.clone().into(); })*
            };
        }
        set! {
            data_dir => cfg.data_dir,
            shots => cfg.shots,
            competitions => cfg.competitions,
            model => cfg.model,
            method => cfg.method,
            grouping => cfg.grouping,
            players => cfg.players,
            baseline => cfg.baseline,
            chains => cfg.sampler.chains,
            draws => cfg.sampler.draws,
            warmup => cfg.sampler.warmup,
            target_accept => cfg.sampler.target_accept,
            seed => cfg.sampler.seed,
            min_shots => cfg.min_shots,
            subsample => cfg.subsample,
            out => cfg.out,
        }
        if let Some(p) = self.prior_set {
            cfg.prior_set = p.into();
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Number of shots.
    #[arg(long, default_value_t = 5000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Truth JSON (intercept, slopes, group offsets); its n and seed are
    /// replaced by the flags.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Also write the shots as a StatsBomb-style open-data directory.
    #[arg(long)]
    pub open_data: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<ValidationError>().is_some() {
        return 1;
    }
    match err.downcast_ref::<xg_core::Error>() {
        Some(
            xg_core::Error::InvalidConfig(_)
            | xg_core::Error::InvalidParameters(_)
            | xg_core::Error::MissingPlayer(_)
            | xg_core::Error::UnknownPlayer(_),
        ) => 1,
        _ => 2,
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code. Errors are reported on stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match commands::dispatch(cli.command, echo) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}
