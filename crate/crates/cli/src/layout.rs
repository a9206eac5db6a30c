//! On-disk stage layout under the cache directory and file helpers.

use std::fs;
use std::path::{Path, PathBuf};

use mdarisk::ingest::{write_atomic, FilingKey};

use crate::config::PipelineConfig;
use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct Layout {
    root: PathBuf,
}

impl Layout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn stage(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn filings_index(&self) -> PathBuf {
        self.stage("index").join("filings.idx")
    }

    pub fn features_csv(&self) -> PathBuf {
        self.stage("features").join("features.csv")
    }

    pub fn lexicons_json(&self) -> PathBuf {
        self.stage("features").join("lexicons.json")
    }

    pub fn dataset_csv(&self) -> PathBuf {
        self.stage("dataset").join("dataset.csv")
    }

    pub fn train_csv(&self) -> PathBuf {
        self.stage("split").join("train.csv")
    }

    pub fn test_csv(&self) -> PathBuf {
        self.stage("split").join("test.csv")
    }

    pub fn model_json(&self, name: &str) -> PathBuf {
        self.stage("models").join(format!("{name}.json"))
    }

    pub fn eval_dir(&self, name: &str) -> PathBuf {
        self.stage("eval").join(name)
    }

    pub fn reports(&self) -> PathBuf {
        self.stage("reports")
    }

    /// `stage/<cik>/<accession>.txt`
    pub fn document(&self, stage: &str, key: &FilingKey) -> PathBuf {
        self.stage(stage)
            .join(key.cik.to_string())
            .join(format!("{}.txt", key.accession))
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            CliError::MissingInput(format!("{} does not exist; run the earlier stage first", path.display()))
        } else {
            CliError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    write_atomic(path, contents.as_bytes()).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the effective configuration into a stage directory.
pub fn echo_config(dir: &Path, cfg: &PipelineConfig) -> Result<(), CliError> {
    write(&dir.join("config.json"), &cfg.to_json())
}

/// Documents stored as `dir/<cik>/<accession>.txt`, sorted by key.
pub fn list_documents(dir: &Path) -> Result<Vec<(FilingKey, PathBuf)>, CliError> {
    let io = |source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    };
    if !dir.is_dir() {
        return Err(CliError::MissingInput(format!("{} does not exist; run the earlier stage first", dir.display())));
    }
    let mut out = Vec::new();
    for cik_entry in fs::read_dir(dir).map_err(io)? {
        let cik_entry = cik_entry.map_err(io)?;
        let Some(cik) = cik_entry.file_name().to_str().and_then(|s| s.parse::<u64>().ok()) else {
            continue;
        };
        if !cik_entry.path().is_dir() {
            continue;
        }
        for doc in fs::read_dir(cik_entry.path()).map_err(io)? {
            let path = doc.map_err(io)?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("txt") {
                continue;
            }
            if let Some(accession) = path.file_stem().and_then(|s| s.to_str()) {
                out.push((
                    FilingKey {
                        cik,
                        accession: accession.to_string(),
                    },
                    path.clone(),
                ));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Names of `*.json` files in `dir`, sorted.
pub fn list_json_stems(dir: &Path) -> Result<Vec<String>, CliError> {
    let io = |source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    };
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.extension().and_then(|e| e.to_str()) == Some("json") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                if stem != "config" {
                    out.push(stem.to_string());
                }
            }
        }
    }
    out.sort();
    Ok(out)
}
