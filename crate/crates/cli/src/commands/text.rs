use std::collections::BTreeMap;

use log::warn;

use mdarisk::lexicon::{featurize_text, parse_lexicon, stress_lexicon, write_feature_csv, FeatureRow, FeatureTable, Lexicon};
use mdarisk::textprep::{clean_text, extract_mda_text, TextError};

use super::tally;
use crate::error::CliError;
use crate::layout::{echo_config, list_documents, read, write};
use crate::models::LexiconInfo;
use crate::Context;

fn rejection_line(key: &mdarisk::ingest::FilingKey, e: &TextError) -> String {
    let words = match e {
        TextError::TooShort(n) | TextError::IncorporatedByReference(n) => n.to_string(),
        _ => String::new(),
    };
    format!("{},{},{},{words}\n", key.cik, key.accession, e.name())
}

const REJECTIONS_HEADER: &str = "cik,accession,error,word_count\n";

pub fn clean(ctx: &Context) -> Result<String, CliError> {
    let docs = list_documents(&ctx.layout.stage("raw"))?;
    let mut rejections = String::from(REJECTIONS_HEADER);
    let mut failures: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut ok = 0;
    for (key, path) in &docs {
        match clean_text(&read(path)?) {
            Ok(text) => {
                write(&ctx.layout.document("clean", key), &text)?;
                ok += 1;
            }
            Err(e) => {
                warn!("{key}: {}", e.name());
                rejections.push_str(&rejection_line(key, &e));
                *failures.entry(e.name()).or_default() += 1;
            }
        }
    }
    let dir = ctx.layout.stage("clean");
    write(&dir.join("rejections.csv"), &rejections)?;
    echo_config(&dir, &ctx.cfg)?;
    Ok(summary("clean", ok, "cleaned", &failures))
}

fn summary(stage: &str, ok: usize, verb: &str, failures: &BTreeMap<&'static str, usize>) -> String {
    let failed: usize = failures.values().sum();
    let mut line = format!("{stage}: {ok} {verb}, {failed} rejected");
    if failed > 0 {
        line.push_str(&format!(" ({})", tally(failures)));
    }
    line
}

pub fn extract_mda(ctx: &Context) -> Result<String, CliError> {
    let docs = list_documents(&ctx.layout.stage("clean"))?;
    let mut rejections = String::from(REJECTIONS_HEADER);
    let mut failures: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut ok = 0;
    for (key, path) in &docs {
        let text = read(path)?;
        match extract_mda_text(&text, ctx.cfg.min_mda_words) {
            Ok((mda, words, rule)) => {
                log::debug!("{key}: {words} words by {}", rule.as_str());
                write(&ctx.layout.document("mda", key), &format!("{mda}\n"))?;
                ok += 1;
            }
            Err(e) => {
                warn!("{key}: {e:?}");
                rejections.push_str(&rejection_line(key, &e));
                *failures.entry(e.name()).or_default() += 1;
            }
        }
    }
    let dir = ctx.layout.stage("mda");
    write(&dir.join("rejections.csv"), &rejections)?;
    echo_config(&dir, &ctx.cfg)?;
    Ok(summary("extract-mda", ok, "extracted", &failures))
}

/// The shipped stress lexicon plus configured files, each named by its file
/// stem. A configured lexicon named `stress` replaces the shipped one.
pub(crate) fn load_lexicons(ctx: &Context) -> Result<Vec<Lexicon>, CliError> {
    let mut lexicons = vec![stress_lexicon()];
    for path in &ctx.cfg.lexicon_paths {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .map(str::to_lowercase)
            .ok_or_else(|| CliError::Usage(format!("cannot name lexicon {}", path.display())))?;
        let lexicon = parse_lexicon(&name, &read(path)?)?;
        lexicons.retain(|l| l.name() != name);
        lexicons.push(lexicon);
    }
    Ok(lexicons)
}

pub fn featurize(ctx: &Context) -> Result<String, CliError> {
    let lexicons = load_lexicons(ctx)?;
    let docs = list_documents(&ctx.layout.stage("mda"))?;
    let mut table = FeatureTable {
        category_names: lexicons.iter().flat_map(|l| l.categories().iter().cloned()).collect(),
        rows: Vec::with_capacity(docs.len()),
    };
    let mut failures: BTreeMap<&'static str, usize> = BTreeMap::new();
    for (key, path) in docs {
        match featurize_text(&read(&path)?, &lexicons) {
            Ok(features) => table.rows.push(FeatureRow {
                key,
                label: None,
                features,
            }),
            Err(e @ mdarisk::lexicon::LexiconError::EmptyDocument) => {
                warn!("{key}: {}", e.name());
                *failures.entry(e.name()).or_default() += 1;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let info: Vec<LexiconInfo> = lexicons
        .iter()
        .map(|l| LexiconInfo {
            name: l.name().to_string(),
            categories: l.categories().to_vec(),
        })
        .collect();
    write(&ctx.layout.features_csv(), &write_feature_csv(&table)?)?;
    write(
        &ctx.layout.lexicons_json(),
        &(serde_json::to_string_pretty(&info).expect("lexicon list serialises") + "\n"),
    )?;
    echo_config(&ctx.layout.stage("features"), &ctx.cfg)?;
    let names: Vec<&str> = lexicons.iter().map(Lexicon::name).collect();
    Ok(format!(
        "{} [{} categories from {}]",
        summary("featurize", table.rows.len(), "documents", &failures),
        table.category_names.len(),
        names.join(", ")
    ))
}
