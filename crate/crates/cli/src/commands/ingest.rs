use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use log::{info, warn};

use mdarisk::ingest::{parse_master_index_with, FilingRecord, Fetcher, HttpTransport, SystemClock};

use super::tally;
use crate::error::CliError;
use crate::layout::{echo_config, read, write};
use crate::Context;

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// Local master index file. Repeatable.
    #[arg(long)]
    pub index_file: Vec<PathBuf>,
    /// Download the master index for this year.
    #[arg(long)]
    pub year: Option<i32>,
    /// Quarter to download (1-4); all four when omitted.
    #[arg(long, requires = "year")]
    pub quarter: Option<u8>,
    /// Form types to keep. Repeatable.
    #[arg(long, default_values_t = ["10-K".to_string()])]
    pub form: Vec<String>,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    /// Fetch at most this many filings.
    #[arg(long)]
    pub limit: Option<usize>,
}

fn fetcher(ctx: &Context) -> Result<Fetcher<HttpTransport, SystemClock>, CliError> {
    Ok(Fetcher::new(
        HttpTransport::new()?,
        SystemClock::default(),
        &ctx.cfg.cache_dir,
        &ctx.cfg.user_agent,
        ctx.cfg.rate_limit,
    )?)
}

pub(crate) const INDEX_HEADER: &str = "CIK|Company Name|Form Type|Date Filed|Filename";

pub(crate) fn render_index(records: &[FilingRecord]) -> String {
    let mut out = format!("{INDEX_HEADER}\n");
    for r in records {
        out.push_str(&format!(
            "{}|{}|{}|{}|{}\n",
            r.cik,
            r.company_name.replace('|', " "),
            r.form_type,
            r.date_filed.format("%Y-%m-%d"),
            r.path
        ));
    }
    out
}

/// Records of `index/filings.idx`.
pub(crate) fn load_index(ctx: &Context) -> Result<Vec<FilingRecord>, CliError> {
    let text = read(&ctx.layout.filings_index())?;
    match parse_master_index_with(&text, &[]) {
        Ok(p) => Ok(p.records),
        Err(mdarisk::ingest::IngestError::EmptyIndex) => Ok(Vec::new()),
        Err(e) => Err(e.into()),
    }
}

pub fn index(ctx: &Context, args: &IndexArgs) -> Result<String, CliError> {
    let mut texts = Vec::new();
    for path in &args.index_file {
        texts.push((path.display().to_string(), read(path)?));
    }
    if let Some(year) = args.year {
        let f = fetcher(ctx)?;
        let quarters = args.quarter.map_or_else(|| vec![1, 2, 3, 4], |q| vec![q]);
        for q in quarters {
            texts.push((format!("{year} Q{q}"), f.fetch_master_index(year, q)?));
        }
    }
    if texts.is_empty() {
        return Err(CliError::Usage("index needs --index-file or --year".into()));
    }
    let forms: Vec<&str> = args.form.iter().map(String::as_str).collect();
    let mut records = Vec::new();
    let (mut filtered, mut skipped) = (0, 0);
    for (source, text) in &texts {
        let parsed = parse_master_index_with(text, &forms)?;
        info!(
            "{source}: {} kept, {} other forms, {} malformed",
            parsed.records.len(),
            parsed.filtered,
            parsed.skipped
        );
        filtered += parsed.filtered;
        skipped += parsed.skipped;
        records.extend(parsed.records);
    }
    records.sort_by(|a, b| a.key().cmp(&b.key()).then(a.date_filed.cmp(&b.date_filed)));
    records.dedup_by(|a, b| a.key() == b.key());

    let out = ctx.layout.filings_index();
    write(&out, &render_index(&records))?;
    echo_config(&ctx.layout.stage("index"), &ctx.cfg)?;
    Ok(format!(
        "index: {} filings kept ({filtered} other forms, {skipped} malformed) -> {}",
        records.len(),
        out.display()
    ))
}

pub fn fetch(ctx: &Context, args: &FetchArgs) -> Result<String, CliError> {
    let mut records = load_index(ctx)?;
    if let Some(limit) = args.limit {
        records.truncate(limit);
    }
    let f = fetcher(ctx)?;
    let (mut cached, mut fetched) = (0, 0);
    let mut failures: BTreeMap<&'static str, usize> = BTreeMap::new();
    for r in &records {
        let hit = f.cache_path(r).is_file();
        match f.fetch_filing(r) {
            Ok(_) if hit => cached += 1,
            Ok(_) => fetched += 1,
            Err(e) => {
                warn!("{}: {}: {e}", r.key(), e.name());
                *failures.entry(e.name()).or_default() += 1;
            }
        }
    }
    echo_config(&ctx.layout.stage("raw"), &ctx.cfg)?;
    let failed: usize = failures.values().sum();
    let mut line = format!("fetch: {fetched} downloaded, {cached} cached, {failed} failed");
    if failed > 0 {
        line.push_str(&format!(" ({})", tally(&failures)));
    }
    Ok(line)
}
