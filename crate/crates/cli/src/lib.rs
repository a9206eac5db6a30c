//! Command-line driver for the mdarisk pipeline.
//!
//! Each subcommand reads its inputs from the cache directory, writes its
//! outputs there together with the effective `config.json`, and prints a
//! one-line summary. Usage and configuration errors exit with status 2, data
//! errors with status 1 and an `error: <Name>: message` line on stderr.

pub mod commands;
pub mod config;
pub mod error;
pub mod layout;
pub mod models;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{load_config, ConfigOverrides, PipelineConfig, CACHE_DIR_ENV};
use crate::error::CliError;
use crate::layout::Layout;

#[derive(Debug, Parser)]
#[command(name = "mdarisk", version, about = "Bankruptcy risk from 10-K MD&A language")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Flat JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub user_agent: Option<String>,
    /// Maximum requests per second to EDGAR.
    #[arg(long, global = true)]
    pub rate_limit: Option<f64>,
    #[arg(long, global = true)]
    pub horizon_days: Option<u32>,
    #[arg(long, global = true)]
    pub min_mda_words: Option<usize>,
    #[arg(long, global = true)]
    pub train_fraction: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub cutoff: Option<f64>,
    /// Extra lexicon file; the file stem names the lexicon. Repeatable.
    #[arg(long = "lexicon-paths", alias = "lexicon", global = true)]
    pub lexicon_paths: Vec<PathBuf>,
    /// Bankruptcy events, `cik,petition_date,chapter`.
    #[arg(long, global = true)]
    pub labels_path: Option<PathBuf>,
    /// Non-bankrupt filings, `cik,accession`.
    #[arg(long, global = true)]
    pub universe_path: Option<PathBuf>,
}

impl GlobalArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            cache_dir: self.cache_dir.clone(),
            user_agent: self.user_agent.clone(),
            rate_limit: self.rate_limit,
            horizon_days: self.horizon_days,
            min_mda_words: self.min_mda_words,
            train_fraction: self.train_fraction,
            seed: self.seed,
            cutoff: self.cutoff,
            lexicon_paths: self.lexicon_paths.clone(),
            labels_path: self.labels_path.clone(),
            universe_path: self.universe_path.clone(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse EDGAR master indices into index/filings.idx.
    Index(commands::ingest::IndexArgs),
    /// Download the indexed filings into raw/.
    Fetch(commands::ingest::FetchArgs),
    /// Strip markup from raw/ into clean/.
    Clean,
    /// Extract MD&A sections from clean/ into mda/.
    ExtractMda,
    /// Compute lexicon features for every MD&A.
    Featurize,
    /// Join features with bankruptcy labels into dataset/dataset.csv.
    Assemble,
    /// Balance and split the dataset into split/train.csv and split/test.csv.
    Split(commands::data::SplitArgs),
    /// Fit named logistic models on the training split.
    Train(commands::model::ModelArgs),
    /// Score trained models on both splits.
    Evaluate(commands::model::ModelArgs),
    /// Tabulate trained and evaluated models.
    Compare,
    /// Welch t-tests, group means and correlations by label.
    Ttest(commands::report::InputArgs),
    /// Feature means by years before bankruptcy.
    Trend,
    /// Bundle comparison, coefficient tables and ROC points.
    Report,
}

/// Everything a subcommand needs.
pub struct Context {
    pub cfg: PipelineConfig,
    pub layout: Layout,
}

fn dispatch(cli: Cli) -> Result<String, CliError> {
    let env_cache = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from);
    let cfg = load_config(cli.global.config.as_deref(), env_cache, &cli.global.overrides())?;
    let ctx = Context {
        layout: Layout::new(&cfg.cache_dir),
        cfg,
    };
    match cli.command {
        Command::Index(a) => commands::ingest::index(&ctx, &a),
        Command::Fetch(a) => commands::ingest::fetch(&ctx, &a),
        Command::Clean => commands::text::clean(&ctx),
        Command::ExtractMda => commands::text::extract_mda(&ctx),
        Command::Featurize => commands::text::featurize(&ctx),
        Command::Assemble => commands::data::assemble(&ctx),
        Command::Split(a) => commands::data::split(&ctx, &a),
        Command::Train(a) => commands::model::train(&ctx, &a),
        Command::Evaluate(a) => commands::model::evaluate(&ctx, &a),
        Command::Compare => commands::report::compare(&ctx),
        Command::Ttest(a) => commands::report::ttest(&ctx, &a),
        Command::Trend => commands::report::trend(&ctx),
        Command::Report => commands::report::report(&ctx),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            e.exit_code()
        }
    }
}
