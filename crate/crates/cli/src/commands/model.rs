use clap::Args;
use serde::{Deserialize, Serialize};

use mdarisk::eval::{evaluate_predictions, roc_csv, ModelEvaluation};
use mdarisk::glm::{fit, predict_prob, wald_inference, DesignMatrix, FitConfig, FittedLogit, WaldRow, DEFAULT_CONFIDENCE};

use super::data::load_dataset;
use crate::error::CliError;
use crate::layout::{echo_config, list_json_stems, read, write};
use crate::models::{available_models, model_features, LexiconInfo};
use crate::Context;

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Model name (liwc, lm, stress, liwc_stress, lm_stress, liwc_lm_stress)
    /// or `all`. Repeatable.
    #[arg(long = "model")]
    pub models: Vec<String>,
}

/// Train and test evaluations of one model, stored as `eval/<name>/metrics.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMetrics {
    pub model: String,
    pub cutoff: f64,
    pub train: ModelEvaluation,
    pub test: ModelEvaluation,
}

pub(crate) fn load_lexicon_info(ctx: &Context) -> Result<Vec<LexiconInfo>, CliError> {
    let path = ctx.layout.lexicons_json();
    serde_json::from_str(&read(&path)?)
        .map_err(|e| CliError::MissingInput(format!("{}: {e}", path.display())))
}

pub(crate) fn load_model(ctx: &Context, name: &str) -> Result<FittedLogit, CliError> {
    Ok(FittedLogit::from_json(&read(&ctx.layout.model_json(name))?)?)
}

pub(crate) fn load_metrics(ctx: &Context, name: &str) -> Result<ModelMetrics, CliError> {
    let path = ctx.layout.eval_dir(name).join("metrics.json");
    serde_json::from_str(&read(&path)?).map_err(|e| CliError::MissingInput(format!("{}: {e}", path.display())))
}

pub(crate) fn coefficients_csv(rows: &[WaldRow]) -> String {
    let mut out = String::from("name,coefficient,se,z,p_value,ci_low,ci_high,odds_ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.name, r.coefficient, r.se, r.z, r.p_value, r.ci_low, r.ci_high, r.odds_ratio
        ));
    }
    out
}

pub fn train(ctx: &Context, args: &ModelArgs) -> Result<String, CliError> {
    if args.models.is_empty() {
        return Err(CliError::Usage("train needs --model NAME (or --model all)".into()));
    }
    let lexicons = load_lexicon_info(ctx)?;
    let names = if args.models.iter().any(|m| m == "all") {
        available_models(&lexicons)
    } else {
        args.models.clone()
    };
    let data = load_dataset(&ctx.layout.train_csv())?;
    let y = data.labels();
    let mut lines = Vec::new();
    for name in &names {
        let features = model_features(name, &lexicons)?;
        let x = DesignMatrix::from_dataset(&data, &features)?;
        let model = fit(&x, &y, &FitConfig::default())?;
        let rows = wald_inference(&model, DEFAULT_CONFIDENCE)?;
        write(&ctx.layout.model_json(name), &model.to_json())?;
        write(
            &ctx.layout.stage("models").join(format!("{name}_coefficients.csv")),
            &coefficients_csv(&rows),
        )?;
        lines.push(format!(
            "{name} (n={}, LL={:.2}, AIC={:.2}, {} iterations)",
            model.n_train, model.log_likelihood, model.aic, model.iterations
        ));
    }
    echo_config(&ctx.layout.stage("models"), &ctx.cfg)?;
    Ok(format!("train: {}", lines.join("; ")))
}

fn evaluate_one(ctx: &Context, name: &str) -> Result<ModelMetrics, CliError> {
    let model = load_model(ctx, name)?;
    let dir = ctx.layout.eval_dir(name);
    let mut evals = Vec::new();
    for (path, roc_name) in [(ctx.layout.train_csv(), "roc_train.csv"), (ctx.layout.test_csv(), "roc.csv")] {
        let data = load_dataset(&path)?;
        let x = DesignMatrix::from_dataset(&data, &model.feature_names)?;
        let p = predict_prob(&model, &x)?;
        let (evaluation, curve) = evaluate_predictions(&data.labels(), &p, ctx.cfg.cutoff)?;
        if let Some(curve) = curve {
            write(&dir.join(roc_name), &roc_csv(&curve))?;
        }
        evals.push(evaluation);
    }
    let test = evals.pop().expect("two evaluations");
    let train = evals.pop().expect("two evaluations");
    let metrics = ModelMetrics {
        model: name.to_string(),
        cutoff: ctx.cfg.cutoff,
        train,
        test,
    };
    write(
        &dir.join("metrics.json"),
        &(serde_json::to_string_pretty(&metrics).expect("metrics serialise") + "\n"),
    )?;
    Ok(metrics)
}

pub fn evaluate(ctx: &Context, args: &ModelArgs) -> Result<String, CliError> {
    let names = if args.models.is_empty() || args.models.iter().any(|m| m == "all") {
        list_json_stems(&ctx.layout.stage("models"))?
    } else {
        args.models.clone()
    };
    if names.is_empty() {
        return Err(CliError::MissingInput("no trained models; run train first".into()));
    }
    let mut lines = Vec::new();
    for name in &names {
        let m = evaluate_one(ctx, name)?;
        lines.push(format!("{name} train [{}] test [{}]", m.train.summary(), m.test.summary()));
    }
    echo_config(&ctx.layout.stage("eval"), &ctx.cfg)?;
    Ok(format!("evaluate: {}", lines.join("; ")))
}
