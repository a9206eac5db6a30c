//! Named model specifications.
//!
//! `liwc` uses the four text descriptors plus every category of the lexicon
//! named `liwc`; `lm` and `stress` use the categories of the lexicons of the
//! same name. Underscore-joined names such as `lm_stress` combine parts.

use serde::{Deserialize, Serialize};

use mdarisk::lexicon::DESCRIPTOR_NAMES;

use crate::error::CliError;

pub const MODEL_NAMES: [&str; 6] = ["liwc", "lm", "stress", "liwc_stress", "lm_stress", "liwc_lm_stress"];

/// Lexicon name and its categories, in feature-table order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconInfo {
    pub name: String,
    pub categories: Vec<String>,
}

pub fn model_features(model: &str, lexicons: &[LexiconInfo]) -> Result<Vec<String>, CliError> {
    if !MODEL_NAMES.contains(&model) {
        return Err(CliError::Usage(format!(
            "unknown model {model:?}; expected one of {}",
            MODEL_NAMES.join(", ")
        )));
    }
    let mut features = Vec::new();
    for part in model.split('_') {
        let lexicon = lexicons.iter().find(|l| l.name == part).ok_or_else(|| {
            CliError::MissingInput(format!(
                "model {model} needs a lexicon named {part}; pass {part}.dic via --lexicon-paths and rerun featurize"
            ))
        })?;
        if part == "liwc" {
            features.extend(DESCRIPTOR_NAMES.iter().map(|s| s.to_string()));
        }
        features.extend(lexicon.categories.iter().cloned());
    }
    Ok(features)
}

/// Models whose lexicons are all available.
pub fn available_models(lexicons: &[LexiconInfo]) -> Vec<String> {
    MODEL_NAMES
        .iter()
        .filter(|m| model_features(m, lexicons).is_ok())
        .map(|m| m.to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(name: &str, cats: &[&str]) -> LexiconInfo {
        LexiconInfo {
            name: name.into(),
            categories: cats.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn combinations_concatenate_parts() {
        let lexicons = [
            lex("stress", &["debt", "distress"]),
            lex("lm", &["negative", "positive", "uncertainty"]),
        ];
        assert_eq!(model_features("stress", &lexicons).unwrap(), ["debt", "distress"]);
        assert_eq!(model_features("lm_stress", &lexicons).unwrap().len(), 5);
        assert!(matches!(model_features("liwc", &lexicons), Err(CliError::MissingInput(_))));
        assert!(matches!(model_features("bogus", &lexicons), Err(CliError::Usage(_))));
        assert_eq!(available_models(&lexicons), ["lm", "stress", "lm_stress"]);
        let with_liwc = [lex("liwc", &["posemo"]), lexicons[0].clone()];
        assert_eq!(
            model_features("liwc_stress", &with_liwc).unwrap(),
            ["wc", "wps", "sixltr", "allpunc", "posemo", "debt", "distress"]
        );
    }
}
