//! Pipeline configuration: defaults, then a flat JSON file, then the
//! `MDARISK_CACHE_DIR` environment variable (cache_dir only), then flags.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const CACHE_DIR_ENV: &str = "MDARISK_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub cache_dir: PathBuf,
    pub user_agent: String,
    pub rate_limit: f64,
    pub horizon_days: u32,
    pub min_mda_words: usize,
    pub train_fraction: f64,
    pub seed: u64,
    pub cutoff: f64,
    pub lexicon_paths: Vec<PathBuf>,
    pub labels_path: Option<PathBuf>,
    pub universe_path: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            cache_dir: PathBuf::from("mdarisk-cache"),
            user_agent: "mdarisk research (set user_agent to an operator contact)".into(),
            rate_limit: mdarisk::ingest::DEFAULT_RATE_LIMIT,
            horizon_days: mdarisk::ingest::DEFAULT_HORIZON_DAYS,
            min_mda_words: mdarisk::textprep::MIN_MDA_WORDS,
            train_fraction: mdarisk::dataset::DEFAULT_TRAIN_FRACTION,
            seed: 42,
            cutoff: 0.5,
            lexicon_paths: Vec::new(),
            labels_path: None,
            universe_path: None,
        }
    }
}

/// Values given on the command line; `None` (or empty) leaves the lower
/// layers in place.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub cache_dir: Option<PathBuf>,
    pub user_agent: Option<String>,
    pub rate_limit: Option<f64>,
    pub horizon_days: Option<u32>,
    pub min_mda_words: Option<usize>,
    pub train_fraction: Option<f64>,
    pub seed: Option<u64>,
    pub cutoff: Option<f64>,
    pub lexicon_paths: Vec<PathBuf>,
    pub labels_path: Option<PathBuf>,
    pub universe_path: Option<PathBuf>,
}

fn config_error(key: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        key: key.to_string(),
        message: message.into(),
    }
}

fn as_f64(key: &str, v: &Value) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| config_error(key, "expected a number"))
}

fn as_u64(key: &str, v: &Value) -> Result<u64, CliError> {
    v.as_u64().ok_or_else(|| config_error(key, "expected a non-negative integer"))
}

fn as_str<'a>(key: &str, v: &'a Value) -> Result<&'a str, CliError> {
    v.as_str().ok_or_else(|| config_error(key, "expected a string"))
}

/// Relative paths in a config file resolve against the file's directory.
fn file_path(base: &Path, key: &str, v: &Value) -> Result<PathBuf, CliError> {
    Ok(base.join(as_str(key, v)?))
}

fn apply_file(cfg: &mut PipelineConfig, map: &Map<String, Value>, base: &Path) -> Result<(), CliError> {
    for (key, v) in map {
        let k = key.as_str();
        match k {
            "cache_dir" => cfg.cache_dir = file_path(base, k, v)?,
            "user_agent" => cfg.user_agent = as_str(k, v)?.to_string(),
            "rate_limit" => cfg.rate_limit = as_f64(k, v)?,
            "horizon_days" => {
                cfg.horizon_days = u32::try_from(as_u64(k, v)?).map_err(|_| config_error(k, "too large"))?
            }
            "min_mda_words" => cfg.min_mda_words = as_u64(k, v)? as usize,
            "train_fraction" => cfg.train_fraction = as_f64(k, v)?,
            "seed" => cfg.seed = as_u64(k, v)?,
            "cutoff" => cfg.cutoff = as_f64(k, v)?,
            "lexicon_paths" => {
                let items = v.as_array().ok_or_else(|| config_error(k, "expected a list of paths"))?;
                cfg.lexicon_paths = items.iter().map(|p| file_path(base, k, p)).collect::<Result<_, _>>()?;
            }
            "labels_path" => cfg.labels_path = Some(file_path(base, k, v)?),
            "universe_path" => cfg.universe_path = Some(file_path(base, k, v)?),
            _ => return Err(config_error(k, "unknown key")),
        }
    }
    Ok(())
}

fn apply_overrides(cfg: &mut PipelineConfig, o: &ConfigOverrides) {
    macro_rules! take {
        ($($field:ident),*) => {$(
            if let Some(v) = &o.$field {
                cfg.$field = v.clone();
            }
        )*};
    }
    take!(cache_dir, user_agent, rate_limit, horizon_days, min_mda_words, train_fraction, seed, cutoff);
    if o.labels_path.is_some() {
        cfg.labels_path = o.labels_path.clone();
    }
    if o.universe_path.is_some() {
        cfg.universe_path = o.universe_path.clone();
    }
    if !o.lexicon_paths.is_empty() {
        cfg.lexicon_paths = o.lexicon_paths.clone();
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.user_agent.trim().is_empty() {
            return Err(config_error("user_agent", "must not be empty"));
        }
        if !(self.rate_limit > 0.0 && self.rate_limit.is_finite()) {
            return Err(config_error("rate_limit", format!("{} is not a positive rate", self.rate_limit)));
        }
        if self.horizon_days == 0 {
            return Err(config_error("horizon_days", "must be positive"));
        }
        if self.min_mda_words == 0 {
            return Err(config_error("min_mda_words", "must be positive"));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(config_error("train_fraction", format!("{} is outside (0, 1)", self.train_fraction)));
        }
        if !(self.cutoff > 0.0 && self.cutoff < 1.0) {
            return Err(config_error("cutoff", format!("{} is outside (0, 1)", self.cutoff)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises") + "\n"
    }
}

/// Layers the configuration and validates the result.
pub fn load_config(
    file: Option<&Path>,
    env_cache_dir: Option<PathBuf>,
    overrides: &ConfigOverrides,
) -> Result<PipelineConfig, CliError> {
    let mut cfg = PipelineConfig::default();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|e| config_error("config", format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| config_error("config", e.to_string()))?;
        let map = value
            .as_object()
            .ok_or_else(|| config_error("config", "expected a flat JSON object"))?;
        let base = path.parent().unwrap_or(Path::new(""));
        apply_file(&mut cfg, map, base)?;
    }
    if let Some(dir) = env_cache_dir {
        cfg.cache_dir = dir;
    }
    apply_overrides(&mut cfg, overrides);
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, body: &str) -> PathBuf {
        let p = dir.join("config.json");
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn empty_config_is_default() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "{}");
        let cfg = load_config(Some(&p), None, &ConfigOverrides::default()).unwrap();
        assert_eq!(cfg, PipelineConfig::default());
        assert_eq!(load_config(None, None, &ConfigOverrides::default()).unwrap(), PipelineConfig::default());
    }

    #[test]
    fn flags_beat_env_beat_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), r#"{"cutoff": 0.4, "cache_dir": "from-file", "seed": 9}"#);
        let flags = ConfigOverrides {
            cutoff: Some(0.6),
            ..Default::default()
        };
        let cfg = load_config(Some(&p), None, &flags).unwrap();
        assert_eq!(cfg.cutoff, 0.6);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.cache_dir, dir.path().join("from-file"));

        let cfg = load_config(Some(&p), Some("env-dir".into()), &flags).unwrap();
        assert_eq!(cfg.cache_dir, PathBuf::from("env-dir"));
        let flags = ConfigOverrides {
            cache_dir: Some("flag-dir".into()),
            ..Default::default()
        };
        let cfg = load_config(Some(&p), Some("env-dir".into()), &flags).unwrap();
        assert_eq!(cfg.cache_dir, PathBuf::from("flag-dir"));
    }

    #[test]
    fn bounds_and_unknown_keys_name_the_key() {
        let dir = tempfile::tempdir().unwrap();
        for (body, key) in [
            (r#"{"cutoff": 1.5}"#, "cutoff"),
            (r#"{"train_fraction": 1}"#, "train_fraction"),
            (r#"{"rate_limit": 0}"#, "rate_limit"),
            (r#"{"horizon_days": 0}"#, "horizon_days"),
            (r#"{"seed": -1}"#, "seed"),
            (r#"{"colour": "red"}"#, "colour"),
            (r#"[1, 2]"#, "config"),
        ] {
            let p = write(dir.path(), body);
            match load_config(Some(&p), None, &ConfigOverrides::default()) {
                Err(CliError::Config { key: k, .. }) => assert_eq!(k, key, "{body}"),
                other => panic!("{body}: {other:?}"),
            }
        }
        let flags = ConfigOverrides {
            cutoff: Some(1.5),
            ..Default::default()
        };
        assert!(matches!(load_config(None, None, &flags), Err(CliError::Config { key, .. }) if key == "cutoff"));
    }
}
