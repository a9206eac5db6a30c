//! Feature CSV: `cik,accession,label,wc,wps,sixltr,allpunc,<categories...>`.
//! `wc` is an integer, other measurements use fixed 4-decimal formatting, and
//! an empty label means the row has not been labelled yet.

use indexmap::IndexMap;

use super::features::{FeatureVector, DESCRIPTOR_NAMES};
use super::LexiconError;
use crate::ingest::FilingKey;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub key: FilingKey,
    pub label: Option<u8>,
    pub features: FeatureVector,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureTable {
    pub category_names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn header(&self) -> String {
        let mut cols = vec!["cik", "accession", "label"];
        cols.extend(DESCRIPTOR_NAMES);
        cols.extend(self.category_names.iter().map(String::as_str));
        cols.join(",")
    }
}

fn csv_error(line: usize, message: impl Into<String>) -> LexiconError {
    LexiconError::Csv {
        line,
        message: message.into(),
    }
}

pub fn write_feature_csv(table: &FeatureTable) -> Result<String, LexiconError> {
    let mut out = table.header();
    out.push('\n');
    for (i, row) in table.rows.iter().enumerate() {
        let f = &row.features;
        let names: Vec<&String> = f.categories.keys().collect();
        if names.len() != table.category_names.len()
            || names.iter().zip(&table.category_names).any(|(a, b)| *a != b)
        {
            return Err(csv_error(i + 2, format!("row {} has a different category schema", row.key)));
        }
        out.push_str(&format!(
            "{},{},{},{},{:.4},{:.4},{:.4}",
            row.key.cik,
            row.key.accession,
            row.label.map(|l| l.to_string()).unwrap_or_default(),
            f.wc,
            f.wps,
            f.sixltr,
            f.allpunc
        ));
        for v in f.categories.values() {
            out.push_str(&format!(",{v:.4}"));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn read_feature_csv(text: &str) -> Result<FeatureTable, LexiconError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| csv_error(1, "missing header"))?;
    let cols: Vec<&str> = header.trim().split(',').collect();
    let fixed = ["cik", "accession", "label"]
        .iter()
        .chain(DESCRIPTOR_NAMES.iter());
    if cols.len() < 7 || cols.iter().zip(fixed).any(|(a, b)| a != b) {
        return Err(csv_error(1, format!("unexpected header {header:?}")));
    }
    let category_names: Vec<String> = cols[7..].iter().map(|s| s.to_string()).collect();

    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != cols.len() {
            return Err(csv_error(line_no, format!("expected {} fields, found {}", cols.len(), fields.len())));
        }
        let num = |i: usize| -> Result<f64, LexiconError> {
            fields[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| csv_error(line_no, format!("column {} is not a number: {:?}", cols[i], fields[i])))
        };
        let cik = fields[0]
            .parse::<u64>()
            .map_err(|_| csv_error(line_no, format!("invalid cik {:?}", fields[0])))?;
        let label = match fields[2] {
            "" => None,
            "0" => Some(0),
            "1" => Some(1),
            other => return Err(csv_error(line_no, format!("label must be 0, 1 or empty, got {other:?}"))),
        };
        let wc = fields[3]
            .parse::<usize>()
            .map_err(|_| csv_error(line_no, format!("invalid wc {:?}", fields[3])))?;
        let mut categories = IndexMap::with_capacity(category_names.len());
        for (k, name) in category_names.iter().enumerate() {
            categories.insert(name.clone(), num(7 + k)?);
        }
        rows.push(FeatureRow {
            key: FilingKey {
                cik,
                accession: fields[1].to_string(),
            },
            label,
            features: FeatureVector {
                wc,
                wps: num(4)?,
                sixltr: num(5)?,
                allpunc: num(6)?,
                categories,
            },
        });
    }
    Ok(FeatureTable {
        category_names,
        rows,
    })
}
