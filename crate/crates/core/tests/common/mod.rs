#![allow(dead_code)]

use std::path::PathBuf;

use indexmap::IndexMap;
use mdarisk::dataset::{Dataset, LabeledSample};
use mdarisk::ingest::FilingKey;
use mdarisk::lexicon::{featurize_text, stress_lexicon};
use mdarisk::textprep::{clean_text, extract_mda_text, TextError};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};
use serde::Deserialize;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/mda")
}

#[derive(Debug, Deserialize)]
pub struct Expected {
    pub status: String,
    pub words: Option<usize>,
    pub text: Option<String>,
}

pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.strip_suffix(".expected.json").map(str::to_string)
        })
        .collect();
    names.sort();
    names
}

fn normalise(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Cleans and extracts one fixture and compares the outcome with its
/// `.expected.json` (status, word count and whitespace-normalised text).
pub fn check_fixture(name: &str) -> Result<(), String> {
    let dir = fixture_dir();
    let raw = std::fs::read_to_string(dir.join(format!("{name}.txt"))).unwrap();
    let expected: Expected =
        serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{name}.expected.json"))).unwrap()).unwrap();
    let outcome = clean_text(&raw).and_then(|clean| {
        extract_mda_text(&clean, 100).map(|(t, n, rule)| (normalise(t), n, rule.as_str().to_string()))
    });
    match outcome {
        Ok((text, words, rule)) => {
            if rule != expected.status {
                return Err(format!("{name}: rule {rule}, expected {}", expected.status));
            }
            if Some(words) != expected.words {
                return Err(format!("{name}: {words} words, expected {:?}", expected.words));
            }
            if Some(&text) != expected.text.as_ref() {
                return Err(format!("{name}: extracted span differs:\n got: {text}\nwant: {:?}", expected.text));
            }
        }
        Err(e) => {
            let words = match e {
                TextError::TooShort(n) | TextError::IncorporatedByReference(n) => Some(n),
                _ => None,
            };
            if e.name() != expected.status || words != expected.words {
                return Err(format!("{name}: {e:?}, expected {} {:?}", expected.status, expected.words));
            }
        }
    }
    Ok(())
}

/// Per-class percentages of the stress categories: (bankrupt mean, healthy
/// mean, standard deviation). Means follow the published group means; the
/// deviations are set so that the bankrupt-vs-healthy separation of each
/// category matches the published t statistics (distress t ≈ 17, debt
/// t ≈ 12, restructure t ≈ 7.7 at 500 per group).
pub const PLANTED: [(&str, &[&str], f64, f64, f64); 4] = [
    ("debt", &["borrowings", "collateral", "secured", "guarantees"], 3.04, 2.58, 0.59),
    ("distress", &["covenant", "default", "breach", "downgrade"], 0.33, 0.21, 0.109),
    ("restructure", &["restructuring", "liquidation", "recapitalization"], 0.09, 0.07, 0.041),
    ("healthy", &["profitable", "dividends", "cash"], 0.55, 0.54, 0.2),
];

/// Words that match no stress-lexicon entry.
const FILLER: &[&str] = &[
    "the", "company", "revenue", "increased", "operations", "during", "year", "compared", "sales", "net", "income",
    "products", "customers", "market", "fiscal", "results", "primarily", "expenses", "quarter", "segment", "demand",
    "pricing", "volume", "margin", "costs", "higher", "lower", "management", "expects", "stable",
];

pub const SYNTHETIC_WORDS: usize = 5000;

/// One synthetic MD&A of `SYNTHETIC_WORDS` words. Each stress category gets
/// `round(pct / 100 · words)` tokens with `pct ~ N(mean, sd)` truncated at 0;
/// the rest is filler, shuffled, with a sentence break every 25 words.
pub fn synthetic_mda(label: u8, rng: &mut StdRng) -> String {
    let mut words: Vec<&str> = Vec::with_capacity(SYNTHETIC_WORDS);
    for (_, vocab, bankrupt, healthy, sd) in PLANTED {
        let mean = if label == 1 { bankrupt } else { healthy };
        let pct = Normal::new(mean, sd).unwrap().sample(rng).max(0.0);
        let count = (pct / 100.0 * SYNTHETIC_WORDS as f64).round() as usize;
        words.extend((0..count).map(|_| vocab[rng.random_range(0..vocab.len())]));
    }
    while words.len() < SYNTHETIC_WORDS {
        words.push(FILLER[rng.random_range(0..FILLER.len())]);
    }
    words.shuffle(rng);
    let mut text = String::with_capacity(SYNTHETIC_WORDS * 8);
    for (i, w) in words.iter().enumerate() {
        text.push_str(w);
        text.push_str(if (i + 1) % 25 == 0 { ". " } else { " " });
    }
    text
}

/// `per_class` bankrupt and `per_class` healthy synthetic MD&As, featurized
/// with the stress lexicon.
pub fn synthetic_dataset(per_class: usize, seed: u64) -> Dataset {
    let mut rng = StdRng::seed_from_u64(seed);
    let lexicons = [stress_lexicon()];
    let samples = (0..2 * per_class)
        .map(|i| {
            let label = u8::from(i < per_class);
            let text = synthetic_mda(label, &mut rng);
            LabeledSample {
                key: FilingKey {
                    cik: i as u64 + 1,
                    accession: format!("0000000000-00-{i:06}"),
                },
                features: featurize_text(&text, &lexicons).unwrap(),
                label,
            }
        })
        .collect();
    Dataset::new(samples).unwrap()
}

/// Feature vector with the four descriptors fixed and the given categories.
pub fn feature_vector(categories: &[(&str, f64)]) -> mdarisk::lexicon::FeatureVector {
    mdarisk::lexicon::FeatureVector {
        wc: 1000,
        wps: 25.0,
        sixltr: 30.0,
        allpunc: 12.0,
        categories: categories
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect::<IndexMap<_, _>>(),
    }
}
