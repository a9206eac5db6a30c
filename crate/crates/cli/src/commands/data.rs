use clap::Args;

use mdarisk::dataset::{assemble as join, balanced_sample, read_universe, train_test_split, Dataset};
use mdarisk::ingest::{label_filings, load_bankruptcy_labels, BankruptcyEvent, FilingKey};
use mdarisk::lexicon::read_feature_csv;

use super::ingest::load_index;
use crate::error::CliError;
use crate::layout::{echo_config, read, write};
use crate::Context;

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Keep every negative instead of down-sampling to the positive count.
    #[arg(long)]
    pub no_balance: bool,
}

pub(crate) fn load_events(ctx: &Context) -> Result<Vec<BankruptcyEvent>, CliError> {
    let path = ctx
        .cfg
        .labels_path
        .as_ref()
        .ok_or_else(|| CliError::MissingInput("labels_path is not configured".into()))?;
    Ok(load_bankruptcy_labels(&read(path)?)?)
}

pub(crate) fn load_dataset(path: &std::path::Path) -> Result<Dataset, CliError> {
    Ok(Dataset::from_csv(&read(path)?)?)
}

fn describe(d: &Dataset) -> String {
    format!("{} ({}+/{}-)", d.len(), d.positives(), d.negatives())
}

pub fn assemble(ctx: &Context) -> Result<String, CliError> {
    let table = read_feature_csv(&read(&ctx.layout.features_csv())?)?;
    let events = load_events(ctx)?;
    let records = load_index(ctx)?;
    let positives: Vec<(FilingKey, u8)> = label_filings(&records, &events, ctx.cfg.horizon_days)?
        .into_iter()
        .filter(|(_, l)| l.value == 1)
        .map(|(r, l)| (r.key(), l.value))
        .collect();
    let universe = match &ctx.cfg.universe_path {
        Some(p) => Some(read_universe(&read(p)?)?),
        None => None,
    };
    let features = table.rows.into_iter().map(|r| (r.key, r.features)).collect();
    let (data, report) = join(features, &positives, universe.as_ref())?;
    write(&ctx.layout.dataset_csv(), &data.to_csv()?)?;
    echo_config(&ctx.layout.stage("dataset"), &ctx.cfg)?;
    Ok(format!(
        "assemble: {} samples, {} dropped without a label",
        describe(&data),
        report.dropped
    ))
}

pub fn split(ctx: &Context, args: &SplitArgs) -> Result<String, CliError> {
    let data = load_dataset(&ctx.layout.dataset_csv())?;
    let data = if args.no_balance {
        data
    } else {
        balanced_sample(&data, ctx.cfg.seed)?
    };
    let (train, test) = train_test_split(&data, ctx.cfg.train_fraction, ctx.cfg.seed)?;
    write(&ctx.layout.train_csv(), &train.to_csv()?)?;
    write(&ctx.layout.test_csv(), &test.to_csv()?)?;
    echo_config(&ctx.layout.stage("split"), &ctx.cfg)?;
    Ok(format!(
        "split: train {}, test {} (seed {})",
        describe(&train),
        describe(&test),
        ctx.cfg.seed
    ))
}
