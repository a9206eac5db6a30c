use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::tokenize::{letter_count, scan, split_sentences};
use super::{Lexicon, LexiconError};
use crate::textprep::MdaDocument;

/// Summary columns that precede the category columns in feature tables.
pub const DESCRIPTOR_NAMES: [&str; 4] = ["wc", "wps", "sixltr", "allpunc"];

/// Raw counts behind a [`FeatureVector`]. Counts are additive over
/// concatenated documents, percentages are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureCounts {
    pub words: usize,
    pub sentences: usize,
    pub six_letter_words: usize,
    pub punctuation: usize,
    pub categories: Vec<(String, usize)>,
}

impl FeatureCounts {
    pub fn to_vector(&self) -> Result<FeatureVector, LexiconError> {
        if self.words == 0 {
            return Err(LexiconError::EmptyDocument);
        }
        let wc = self.words as f64;
        let pct = |n: usize| 100.0 * n as f64 / wc;
        Ok(FeatureVector {
            wc: self.words,
            wps: wc / self.sentences.max(1) as f64,
            sixltr: pct(self.six_letter_words),
            allpunc: pct(self.punctuation),
            categories: self
                .categories
                .iter()
                .map(|(name, n)| (name.clone(), pct(*n)))
                .collect(),
        })
    }
}

/// Per-document measurements. Every value except `wc` and `wps` is a
/// percentage of words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub wc: usize,
    pub wps: f64,
    pub sixltr: f64,
    pub allpunc: f64,
    pub categories: IndexMap<String, f64>,
}

impl FeatureVector {
    /// Looks up a descriptor (`wc`, `wps`, `sixltr`, `allpunc`) or category.
    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "wc" => Some(self.wc as f64),
            "wps" => Some(self.wps),
            "sixltr" => Some(self.sixltr),
            "allpunc" => Some(self.allpunc),
            other => self.categories.get(other).copied(),
        }
    }

    /// Descriptor names followed by category names, in column order.
    pub fn names(&self) -> Vec<String> {
        DESCRIPTOR_NAMES
            .iter()
            .map(|s| s.to_string())
            .chain(self.categories.keys().cloned())
            .collect()
    }

    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![self.wc as f64, self.wps, self.sixltr, self.allpunc];
        v.extend(self.categories.values().copied());
        v
    }
}

pub fn count_features(text: &str, lexicons: &[Lexicon]) -> Result<FeatureCounts, LexiconError> {
    let mut names: Vec<&str> = Vec::new();
    for lex in lexicons {
        for c in lex.categories() {
            if names.contains(&c.as_str()) || DESCRIPTOR_NAMES.contains(&c.as_str()) {
                return Err(LexiconError::DuplicateCategory(c.clone()));
            }
            names.push(c);
        }
    }

    let scanned = scan(text);
    let sentences = split_sentences(text).len();
    let six_letter_words = scanned.tokens.iter().filter(|t| letter_count(t) >= 6).count();
    let mut categories = Vec::with_capacity(names.len());
    for lex in lexicons {
        let counts = lex.count_matches(&scanned.tokens);
        categories.extend(lex.categories().iter().cloned().zip(counts));
    }
    Ok(FeatureCounts {
        words: scanned.tokens.len(),
        sentences,
        six_letter_words,
        punctuation: scanned.punctuation,
        categories,
    })
}

pub fn featurize_text(text: &str, lexicons: &[Lexicon]) -> Result<FeatureVector, LexiconError> {
    count_features(text, lexicons)?.to_vector()
}

pub fn featurize(doc: &MdaDocument, lexicons: &[Lexicon]) -> Result<FeatureVector, LexiconError> {
    featurize_text(&doc.text, lexicons)
}
