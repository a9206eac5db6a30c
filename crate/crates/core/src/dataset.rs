//! Labelled feature datasets: joining, balanced down-sampling and stratified
//! train/test splits. All sampling goes through [`Lcg64`] so selections are
//! reproducible from `(input order, seed)`.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::ingest::FilingKey;
use crate::lexicon::{read_feature_csv, write_feature_csv, FeatureRow, FeatureTable, FeatureVector, LexiconError};
use crate::rng::Lcg64;

pub const DEFAULT_TRAIN_FRACTION: f64 = 0.8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatasetError {
    #[error("feature schema of {key} differs from the first row")]
    SchemaMismatch { key: FilingKey },
    #[error("duplicate key {0}")]
    DuplicateKey(FilingKey),
    #[error("insufficient samples: {0}")]
    Insufficient(String),
    #[error("invalid train fraction {0}")]
    InvalidFraction(f64),
    #[error("universe file line {line}: {message}")]
    Universe { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] LexiconError),
}

impl DatasetError {
    pub fn name(&self) -> &'static str {
        match self {
            DatasetError::SchemaMismatch { .. } => "SchemaMismatch",
            DatasetError::DuplicateKey(_) => "DuplicateKey",
            DatasetError::Insufficient(_) => "Insufficient",
            DatasetError::InvalidFraction(_) => "InvalidFraction",
            DatasetError::Universe { .. } => "UniverseError",
            DatasetError::Csv(e) => e.name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub key: FilingKey,
    pub features: FeatureVector,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    samples: Vec<LabeledSample>,
    feature_names: Vec<String>,
    /// Seed of the last sampling step that produced this dataset.
    seed: Option<u64>,
}

impl Dataset {
    pub fn new(samples: Vec<LabeledSample>) -> Result<Self, DatasetError> {
        let feature_names = samples.first().map(|s| s.features.names()).unwrap_or_default();
        let mut keys = HashSet::with_capacity(samples.len());
        for s in &samples {
            if s.label > 1 {
                return Err(DatasetError::Insufficient(format!("label {} of {} is not binary", s.label, s.key)));
            }
            if !keys.insert(&s.key) {
                return Err(DatasetError::DuplicateKey(s.key.clone()));
            }
            if !same_schema(&s.features, &feature_names) {
                return Err(DatasetError::SchemaMismatch { key: s.key.clone() });
            }
        }
        Ok(Self {
            samples,
            feature_names,
            seed: None,
        })
    }

    fn derived(&self, samples: Vec<LabeledSample>, seed: u64) -> Self {
        Self {
            samples,
            feature_names: self.feature_names.clone(),
            seed: Some(seed),
        }
    }

    pub fn samples(&self) -> &[LabeledSample] {
        &self.samples
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.samples.iter().filter(|s| s.label == 1).count()
    }

    pub fn negatives(&self) -> usize {
        self.len() - self.positives()
    }

    pub fn labels(&self) -> Vec<u8> {
        self.samples.iter().map(|s| s.label).collect()
    }

    /// Values of one feature across samples, or `None` for an unknown name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        if !self.feature_names.iter().any(|n| n == name) {
            return None;
        }
        self.samples.iter().map(|s| s.features.get(name)).collect()
    }

    pub fn to_csv(&self) -> Result<String, DatasetError> {
        let table = FeatureTable {
            category_names: self.feature_names.iter().skip(4).cloned().collect(),
            rows: self
                .samples
                .iter()
                .map(|s| FeatureRow {
                    key: s.key.clone(),
                    label: Some(s.label),
                    features: s.features.clone(),
                })
                .collect(),
        };
        Ok(write_feature_csv(&table)?)
    }

    /// Reads a feature CSV in which every row carries a label.
    pub fn from_csv(text: &str) -> Result<Self, DatasetError> {
        let table = read_feature_csv(text)?;
        let samples = table
            .rows
            .into_iter()
            .map(|r| match r.label {
                Some(label) => Ok(LabeledSample {
                    key: r.key,
                    features: r.features,
                    label,
                }),
                None => Err(DatasetError::Insufficient(format!("row {} has no label", r.key))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut ds = Self::new(samples)?;
        if ds.feature_names.is_empty() {
            ds.feature_names = crate::lexicon::DESCRIPTOR_NAMES
                .iter()
                .map(|s| s.to_string())
                .chain(table.category_names)
                .collect();
        }
        Ok(ds)
    }
}

fn same_schema(f: &FeatureVector, names: &[String]) -> bool {
    names.len() == 4 + f.categories.len() && f.categories.keys().zip(&names[4..]).all(|(a, b)| a == b)
}

/// Counts from [`assemble`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AssembleReport {
    pub labelled: usize,
    pub from_universe: usize,
    pub dropped: usize,
}

/// Inner join of feature rows with labels. A feature row without a label
/// gets label 0 when `universe` lists its key and is dropped otherwise.
/// Conflicting duplicate labels resolve to 1.
pub fn assemble(
    features: Vec<(FilingKey, FeatureVector)>,
    labels: &[(FilingKey, u8)],
    universe: Option<&HashSet<FilingKey>>,
) -> Result<(Dataset, AssembleReport), DatasetError> {
    let mut label_of: HashMap<&FilingKey, u8> = HashMap::with_capacity(labels.len());
    for (k, l) in labels {
        let e = label_of.entry(k).or_insert(*l);
        *e = (*e).max(*l);
    }
    let mut report = AssembleReport::default();
    let mut seen = HashSet::with_capacity(features.len());
    let mut samples = Vec::with_capacity(features.len());
    let mut names: Option<Vec<String>> = None;

    for (key, fv) in features {
        if !seen.insert(key.clone()) {
            return Err(DatasetError::DuplicateKey(key));
        }
        let schema = names.get_or_insert_with(|| fv.names());
        if !same_schema(&fv, schema) {
            return Err(DatasetError::SchemaMismatch { key });
        }
        let label = match label_of.get(&key) {
            Some(&l) => {
                report.labelled += 1;
                l
            }
            None if universe.is_some_and(|u| u.contains(&key)) => {
                report.from_universe += 1;
                0
            }
            None => {
                report.dropped += 1;
                continue;
            }
        };
        samples.push(LabeledSample {
            key,
            features: fv,
            label,
        });
    }
    let mut ds = Dataset::new(samples)?;
    if ds.feature_names.is_empty() {
        ds.feature_names = names.unwrap_or_default();
    }
    Ok((ds, report))
}

/// Parses a `cik,accession` list of non-bankrupt filings; an optional header
/// line is recognised by a non-numeric first field.
pub fn read_universe(text: &str) -> Result<HashSet<FilingKey>, DatasetError> {
    let mut out = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let cik = fields[0].parse::<u64>();
        if i == 0 && cik.is_err() {
            continue;
        }
        let err = |message: &str| DatasetError::Universe {
            line: i + 1,
            message: message.to_string(),
        };
        if fields.len() != 2 || fields[1].is_empty() {
            return Err(err("expected `cik,accession`"));
        }
        out.insert(FilingKey {
            cik: cik.map_err(|_| err("invalid cik"))?,
            accession: fields[1].to_string(),
        });
    }
    Ok(out)
}

/// Keeps every positive and an equal number of negatives chosen uniformly
/// without replacement. Output keeps the input order.
pub fn balanced_sample(data: &Dataset, seed: u64) -> Result<Dataset, DatasetError> {
    let pos = data.positives();
    let neg_idx: Vec<usize> = (0..data.len()).filter(|&i| data.samples[i].label == 0).collect();
    if pos == 0 {
        return Err(DatasetError::Insufficient("no positive samples".into()));
    }
    if neg_idx.len() < pos {
        return Err(DatasetError::Insufficient(format!(
            "{} negatives for {} positives",
            neg_idx.len(),
            pos
        )));
    }
    let mut shuffled = neg_idx;
    Lcg64::new(seed).shuffle(&mut shuffled);
    let mut keep = vec![false; data.len()];
    for &i in &shuffled[..pos] {
        keep[i] = true;
    }
    let samples = data
        .samples
        .iter()
        .zip(keep)
        .filter(|(s, k)| s.label == 1 || *k)
        .map(|(s, _)| s.clone())
        .collect();
    Ok(data.derived(samples, seed))
}

/// Stratified split: each class is shuffled (positives first, then
/// negatives, from one generator) and its first `floor(train_fraction * n)`
/// members go to training. Both partitions keep the input order.
pub fn train_test_split(
    data: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset), DatasetError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DatasetError::InvalidFraction(train_fraction));
    }
    let mut rng = Lcg64::new(seed);
    let mut in_train = vec![false; data.len()];
    for label in [1u8, 0] {
        let mut idx: Vec<usize> = (0..data.len()).filter(|&i| data.samples[i].label == label).collect();
        let n = idx.len();
        // The epsilon absorbs products such as 0.29 * 100 = 28.999999999999996.
        let n_train = (train_fraction * n as f64 + 1e-9).floor() as usize;
        if n_train == 0 || n_train == n {
            return Err(DatasetError::Insufficient(format!(
                "class {label} with {n} samples leaves an empty partition at fraction {train_fraction}"
            )));
        }
        rng.shuffle(&mut idx);
        for &i in &idx[..n_train] {
            in_train[i] = true;
        }
    }
    let (train, test): (Vec<_>, Vec<_>) = data.samples.iter().zip(in_train).partition(|(_, t)| *t);
    let unzip = |v: Vec<(&LabeledSample, bool)>| v.into_iter().map(|(s, _)| s.clone()).collect();
    Ok((data.derived(unzip(train), seed), data.derived(unzip(test), seed)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use indexmap::IndexMap;

    pub(crate) fn fv(x: f64) -> FeatureVector {
        FeatureVector {
            wc: 100,
            wps: 20.0,
            sixltr: 25.0,
            allpunc: 10.0,
            categories: IndexMap::from([("debt".to_string(), x)]),
        }
    }

    fn key(i: u64) -> FilingKey {
        FilingKey {
            cik: i,
            accession: format!("acc-{i}"),
        }
    }

    fn data(pos: usize, neg: usize) -> Dataset {
        let samples = (0..pos + neg)
            .map(|i| LabeledSample {
                key: key(i as u64 + 1),
                features: fv(i as f64),
                label: u8::from(i < pos),
            })
            .collect();
        Dataset::new(samples).unwrap()
    }

    #[test]
    fn join_drops_unlabelled_without_universe() {
        let feats = vec![(key(1), fv(1.0)), (key(2), fv(2.0)), (key(3), fv(3.0))];
        let labels = vec![(key(1), 1), (key(3), 0)];
        let (ds, rep) = assemble(feats.clone(), &labels, None).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(rep.dropped, 1);

        let universe = HashSet::from([key(2)]);
        let (ds, rep) = assemble(feats, &labels, Some(&universe)).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(rep.from_universe, 1);
        assert_eq!(ds.samples()[1].label, 0);
    }

    #[test]
    fn duplicate_and_schema_errors() {
        let feats = vec![(key(1), fv(1.0)), (key(1), fv(2.0))];
        assert!(matches!(assemble(feats, &[], None), Err(DatasetError::DuplicateKey(_))));
        let mut other = fv(1.0);
        other.categories.insert("distress".into(), 0.0);
        let feats = vec![(key(1), fv(1.0)), (key(2), other)];
        assert!(matches!(assemble(feats, &[], None), Err(DatasetError::SchemaMismatch { .. })));
    }

    #[test]
    fn empty_inputs() {
        let (ds, rep) = assemble(vec![], &[], None).unwrap();
        assert!(ds.is_empty());
        assert_eq!(rep, AssembleReport::default());
    }

    #[test]
    fn balanced_counts_and_determinism() {
        let d = data(5, 50);
        let a = balanced_sample(&d, 7).unwrap();
        assert_eq!((a.positives(), a.negatives()), (5, 5));
        assert_eq!(a, balanced_sample(&d, 7).unwrap());
        assert_eq!(a.seed(), Some(7));
        assert_ne!(a, balanced_sample(&d, 8).unwrap());
    }

    #[test]
    fn balanced_insufficient() {
        assert!(matches!(balanced_sample(&data(5, 3), 1), Err(DatasetError::Insufficient(_))));
        assert!(matches!(balanced_sample(&data(0, 3), 1), Err(DatasetError::Insufficient(_))));
    }

    #[test]
    fn split_counts() {
        let (train, test) = train_test_split(&data(10, 10), 0.8, 3).unwrap();
        assert_eq!((train.positives(), train.negatives()), (8, 8));
        assert_eq!((test.positives(), test.negatives()), (2, 2));
        let (train, _) = train_test_split(&data(500, 500), 0.8, 3).unwrap();
        assert_eq!(train.len(), 800);
        let (train, _) = train_test_split(&data(100, 100), 0.29, 3).unwrap();
        assert_eq!(train.len(), 58);
    }

    #[test]
    fn split_errors() {
        assert!(matches!(train_test_split(&data(10, 10), 1.0, 1), Err(DatasetError::InvalidFraction(_))));
        assert!(matches!(train_test_split(&data(10, 10), 0.0, 1), Err(DatasetError::InvalidFraction(_))));
        assert!(matches!(train_test_split(&data(1, 10), 0.8, 1), Err(DatasetError::Insufficient(_))));
    }

    #[test]
    fn csv_round_trip() {
        let d = data(2, 2);
        let text = d.to_csv().unwrap();
        let back = Dataset::from_csv(&text).unwrap();
        assert_eq!(back.samples(), d.samples());
        assert_eq!(back.feature_names(), d.feature_names());
    }

    #[test]
    fn universe_file() {
        let u = read_universe("cik,accession\n1,acc-1\n\n2,acc-2\n").unwrap();
        assert_eq!(u.len(), 2);
        assert!(read_universe("1\n").is_err());
    }
}
