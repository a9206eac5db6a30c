use std::collections::HashMap;
use std::path::PathBuf;

use chrono::NaiveDate;
use clap::Args;

use mdarisk::eval::{
    cohort_trend, compare_models, correlation_matrix, group_means, welch_t_test, ComparisonTable, ModelSummary,
};
use mdarisk::glm::{likelihood_ratio_test, wald_inference, FittedLogit, DEFAULT_CONFIDENCE};
use mdarisk::lexicon::read_feature_csv;

use super::data::{load_dataset, load_events};
use super::ingest::load_index;
use super::model::{load_metrics, load_model, ModelMetrics};
use crate::error::CliError;
use crate::layout::{echo_config, list_json_stems, read, write};
use crate::Context;

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Labelled feature CSV to analyse; defaults to dataset/dataset.csv.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |x| x.to_string())
}

/// Models that have both a model file and evaluation metrics, by name.
fn evaluated_models(ctx: &Context) -> Result<Vec<(String, FittedLogit, ModelMetrics)>, CliError> {
    let mut out = Vec::new();
    for name in list_json_stems(&ctx.layout.stage("models"))? {
        let model = load_model(ctx, &name)?;
        match load_metrics(ctx, &name) {
            Ok(metrics) => out.push((name, model, metrics)),
            Err(CliError::MissingInput(msg)) => log::warn!("skipping {name}: {msg}"),
            Err(e) => return Err(e),
        }
    }
    if out.is_empty() {
        return Err(CliError::MissingInput("no evaluated models; run train and evaluate first".into()));
    }
    Ok(out)
}

fn comparison(models: &[(String, FittedLogit, ModelMetrics)]) -> Result<ComparisonTable, CliError> {
    let summaries: Vec<ModelSummary<'_>> = models
        .iter()
        .map(|(name, model, metrics)| ModelSummary {
            name: name.clone(),
            model,
            train: &metrics.train,
            test: &metrics.test,
        })
        .collect();
    Ok(compare_models(&summaries)?)
}

/// Likelihood-ratio tests for every pair where one model's predictors are a
/// strict subset of the other's.
fn nested_tests(models: &[(String, FittedLogit, ModelMetrics)]) -> Result<String, CliError> {
    let mut out = String::from("nested,full,statistic,df,p_value\n");
    for (a, ma, _) in models {
        for (b, mb, _) in models {
            let strict_subset = ma.feature_names.len() < mb.feature_names.len()
                && ma.feature_names.iter().all(|f| mb.feature_names.contains(f));
            if strict_subset && ma.n_train == mb.n_train {
                let t = likelihood_ratio_test(ma, mb)?;
                out.push_str(&format!("{a},{b},{},{},{}\n", t.statistic, t.df, t.p_value));
            }
        }
    }
    Ok(out)
}

pub fn compare(ctx: &Context) -> Result<String, CliError> {
    let models = evaluated_models(ctx)?;
    let table = comparison(&models)?;
    let dir = ctx.layout.reports();
    write(&dir.join("comparison.csv"), &table.to_csv())?;
    write(&dir.join("comparison.txt"), &table.to_text())?;
    write(&dir.join("lrt.csv"), &nested_tests(&models)?)?;
    echo_config(&dir, &ctx.cfg)?;
    let best = &table.rows[0];
    Ok(format!(
        "compare: {} models, best training accuracy {} ({}) -> {}",
        table.rows.len(),
        opt(best.training_accuracy),
        best.model,
        dir.join("comparison.csv").display()
    ))
}

pub fn ttest(ctx: &Context, args: &InputArgs) -> Result<String, CliError> {
    let path = args.input.clone().unwrap_or_else(|| ctx.layout.dataset_csv());
    let data = load_dataset(&path)?;
    let mut out = String::from("feature,t,df,p_value,mean_bankrupt,mean_healthy,sd_bankrupt,sd_healthy\n");
    let mut tested = 0;
    for name in data.feature_names() {
        let column = data.column(name).expect("feature of this dataset");
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (v, s) in column.into_iter().zip(data.samples()) {
            if s.label == 1 { a.push(v) } else { b.push(v) }
        }
        match welch_t_test(&a, &b) {
            Ok(r) => {
                tested += 1;
                out.push_str(&format!(
                    "{name},{},{},{},{},{},{},{}\n",
                    r.t, r.df, r.p_value, r.mean_a, r.mean_b, r.sd_a, r.sd_b
                ));
            }
            Err(e) => {
                log::warn!("{name}: {}", e.name());
                out.push_str(&format!("{name},NA,NA,NA,NA,NA,NA,NA\n"));
            }
        }
    }
    let means = group_means(&data)?;
    let corr = correlation_matrix(&data, data.feature_names())?;
    let dir = ctx.layout.reports();
    write(&dir.join("ttest.csv"), &out)?;
    write(&dir.join("group_means.csv"), &means.to_csv())?;
    write(&dir.join("group_means.txt"), &means.to_text())?;
    write(&dir.join("correlation.csv"), &corr.to_csv())?;
    echo_config(&dir, &ctx.cfg)?;
    Ok(format!(
        "ttest: {tested} of {} features tested on {} samples -> {}",
        data.feature_names().len(),
        data.len(),
        dir.join("ttest.csv").display()
    ))
}

pub fn trend(ctx: &Context) -> Result<String, CliError> {
    let table = read_feature_csv(&read(&ctx.layout.features_csv())?)?;
    let records = load_index(ctx)?;
    let events = load_events(ctx)?;
    let mut petitions: HashMap<u64, Vec<NaiveDate>> = HashMap::new();
    for e in &events {
        petitions.entry(e.cik).or_default().push(e.filing_date);
    }
    let mut last_filing: HashMap<u64, NaiveDate> = HashMap::new();
    for r in &records {
        let d = last_filing.entry(r.cik).or_insert(r.date_filed);
        *d = (*d).max(r.date_filed);
    }
    let dates: HashMap<_, _> = records.iter().map(|r| (r.key(), r.date_filed)).collect();

    let mut samples = Vec::new();
    let mut unindexed = 0;
    for row in table.rows {
        let Some(&filed) = dates.get(&row.key) else {
            unindexed += 1;
            continue;
        };
        let next_petition = petitions
            .get(&row.key.cik)
            .and_then(|ds| ds.iter().filter(|&&d| d > filed).min().copied());
        // Bankrupt filings count years to the petition; healthy filings count
        // years to the firm's latest indexed filing.
        let (label, anchor) = match next_petition {
            Some(p) => (1, p),
            None => (0, last_filing[&row.key.cik]),
        };
        let years = ((anchor - filed).num_days() / 365) as u32;
        samples.push((years, row.features, label));
    }
    let trend = cohort_trend(&samples)?;
    let dir = ctx.layout.reports();
    write(&dir.join("trend.csv"), &trend.to_csv())?;
    echo_config(&dir, &ctx.cfg)?;
    Ok(format!(
        "trend: {} filings in 0..=5 years, {} outside, {unindexed} not in the index -> {}",
        samples.len() - trend.skipped,
        trend.skipped,
        dir.join("trend.csv").display()
    ))
}

fn coefficient_text(model: &FittedLogit) -> Result<String, CliError> {
    let rows = wald_inference(model, DEFAULT_CONFIDENCE)?;
    let w = rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(9);
    let mut out = format!(
        "{:<w$} {:>12} {:>8} {:>8} {:>10} {:>10} {:>12}\n",
        "Predictor", "Coefficient", "SE", "p", "CI low", "CI high", "Odds ratio"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<w$} {:>12.2} {:>8.2} {:>8.2} {:>10.2} {:>10.2} {:>12.2}\n",
            r.name, r.coefficient, r.se, r.p_value, r.ci_low, r.ci_high, r.odds_ratio
        ));
    }
    Ok(out)
}

pub fn report(ctx: &Context) -> Result<String, CliError> {
    let models = evaluated_models(ctx)?;
    let table = comparison(&models)?;
    let dir = ctx.layout.reports();
    write(&dir.join("comparison.csv"), &table.to_csv())?;
    write(&dir.join("comparison.txt"), &table.to_text())?;

    let mut md = String::from("# mdarisk report\n\n## Model comparison\n\n```text\n");
    md.push_str(&table.to_text());
    md.push_str("```\n");
    let mut roc_files = 0;
    for (name, model, metrics) in &models {
        md.push_str(&format!(
            "\n## {name}\n\nCutoff {}. Test AUC {}.\n\n```text\n{}```\n",
            metrics.cutoff,
            opt(metrics.test.auc),
            coefficient_text(model)?
        ));
        let roc = ctx.layout.eval_dir(name).join("roc.csv");
        if roc.is_file() {
            write(&dir.join("roc").join(format!("{name}.csv")), &read(&roc)?)?;
            md.push_str(&format!("\nROC points: `roc/{name}.csv`\n"));
            roc_files += 1;
        }
    }
    let means = dir.join("group_means.txt");
    if means.is_file() {
        md.push_str(&format!("\n## Feature means by label\n\n```text\n{}```\n", read(&means)?));
    }
    write(&dir.join("report.md"), &md)?;
    echo_config(&dir, &ctx.cfg)?;
    Ok(format!(
        "report: {} models, {roc_files} ROC files -> {}",
        models.len(),
        dir.join("report.md").display()
    ))
}
