//! Category lexicons and per-document linguistic features.
//!
//! Lexicon files use the dictionary layout shared by LIWC-style tools:
//!
//! ```text
//! %
//! 1    debt
//! 2    distress
//! %
//! borrow*    1
//! chapter 11    2
//! amendment*    1    2
//! ```
//!
//! Columns are tab-separated (shown here as spaces). The first block
//! declares `id<TAB>name` categories, the second lists
//! `pattern<TAB>id[<TAB>id...]` entries. Pattern tokens are separated by single
//! spaces and a trailing `*` on the last token makes it a prefix match.

mod features;
mod table;
mod tokenize;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

pub use features::{count_features, featurize, featurize_text, FeatureCounts, FeatureVector, DESCRIPTOR_NAMES};
pub use table::{read_feature_csv, write_feature_csv, FeatureRow, FeatureTable};
pub use tokenize::{is_punctuation, letter_count, scan, split_sentences, tokenize, Scan};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LexiconError {
    #[error("lexicon format error at line {line}: {message}")]
    FormatError { line: usize, message: String },
    #[error("document has no words")]
    EmptyDocument,
    #[error("category {0:?} is defined by more than one lexicon")]
    DuplicateCategory(String),
    #[error("feature csv line {line}: {message}")]
    Csv { line: usize, message: String },
}

impl LexiconError {
    pub fn name(&self) -> &'static str {
        match self {
            LexiconError::FormatError { .. } => "FormatError",
            LexiconError::EmptyDocument => "EmptyDocument",
            LexiconError::DuplicateCategory(_) => "DuplicateCategory",
            LexiconError::Csv { .. } => "CsvError",
        }
    }
}

/// A lowercase token sequence; the final token is a prefix stem when
/// `wildcard` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    tokens: Vec<String>,
    wildcard: bool,
}

impl Pattern {
    pub fn parse(text: &str) -> Result<Self, String> {
        let raw: Vec<&str> = text.split(' ').collect();
        if raw.iter().any(|t| t.is_empty()) {
            return Err(format!("malformed pattern {text:?}"));
        }
        let mut tokens: Vec<String> = raw.iter().map(|t| t.to_lowercase()).collect();
        let last = tokens.last_mut().expect("split yields at least one piece");
        let wildcard = last.ends_with('*');
        if wildcard {
            last.pop();
        }
        if tokens.iter().any(|t| t.is_empty() || t.contains('*')) {
            return Err(format!("wildcard only allowed at the end of a non-empty stem: {text:?}"));
        }
        Ok(Self { tokens, wildcard })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn is_wildcard(&self) -> bool {
        self.wildcard
    }

    pub fn matches_token(&self, idx: usize, token: &str) -> bool {
        let p = &self.tokens[idx];
        if self.wildcard && idx + 1 == self.tokens.len() {
            token.starts_with(p.as_str())
        } else {
            token == p
        }
    }

    /// True when the pattern matches `tokens` starting at `at`.
    pub fn matches_at(&self, tokens: &[String], at: usize) -> bool {
        at + self.len() <= tokens.len()
            && (0..self.len()).all(|k| self.matches_token(k, &tokens[at + k]))
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.tokens.join(" "))?;
        if self.wildcard {
            write!(f, "*")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub pattern: Pattern,
    /// Indices into [`Lexicon::categories`].
    pub categories: Vec<usize>,
}

/// Immutable category dictionary with a first-token lookup index.
#[derive(Debug, Clone)]
pub struct Lexicon {
    name: String,
    categories: Vec<String>,
    entries: Vec<Entry>,
    exact_first: HashMap<String, Vec<usize>>,
    stem_first: HashMap<String, Vec<usize>>,
}

impl Lexicon {
    pub fn new(name: impl Into<String>, categories: Vec<String>, entries: Vec<Entry>) -> Result<Self, LexiconError> {
        let mut seen = HashSet::new();
        for (i, e) in entries.iter().enumerate() {
            if e.pattern.is_empty() {
                return Err(format_error(i + 1, "empty pattern"));
            }
            if e.categories.is_empty() || e.categories.iter().any(|&c| c >= categories.len()) {
                return Err(format_error(i + 1, "entry references an unknown category"));
            }
            if !seen.insert(e.pattern.clone()) {
                return Err(format_error(i + 1, &format!("duplicate pattern {}", e.pattern)));
            }
        }
        let mut exact_first: HashMap<String, Vec<usize>> = HashMap::new();
        let mut stem_first: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            let first = e.pattern.tokens[0].clone();
            if e.pattern.wildcard && e.pattern.len() == 1 {
                stem_first.entry(first).or_default().push(i);
            } else {
                exact_first.entry(first).or_default().push(i);
            }
        }
        Ok(Self {
            name: name.into(),
            categories,
            entries,
            exact_first,
            stem_first,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Entries whose first pattern token can match `token`.
    fn candidates<'a>(&'a self, token: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        let exact = self.exact_first.get(token).into_iter().flatten();
        let stems = token
            .char_indices()
            .map(|(i, c)| &token[..i + c.len_utf8()])
            .filter_map(|prefix| self.stem_first.get(prefix))
            .flatten();
        exact.chain(stems).map(|&i| &self.entries[i])
    }

    /// Number of tokens consumed per category.
    ///
    /// Each category is scanned greedily left to right: at every position the
    /// longest matching entry of that category consumes its tokens. Categories
    /// are independent, so one token can count toward several categories.
    pub fn count_matches(&self, tokens: &[String]) -> Vec<usize> {
        let n_cat = self.categories.len();
        let mut counts = vec![0usize; n_cat];
        let mut busy_until = vec![0usize; n_cat];
        let mut best = vec![0usize; n_cat];
        let mut touched = Vec::new();

        for i in 0..tokens.len() {
            for entry in self.candidates(&tokens[i]) {
                let len = entry.pattern.len();
                if !entry.pattern.matches_at(tokens, i) {
                    continue;
                }
                for &c in &entry.categories {
                    if busy_until[c] <= i && len > best[c] {
                        if best[c] == 0 {
                            touched.push(c);
                        }
                        best[c] = len;
                    }
                }
            }
            for c in touched.drain(..) {
                counts[c] += best[c];
                busy_until[c] = i + best[c];
                best[c] = 0;
            }
        }
        counts
    }
}

fn format_error(line: usize, message: &str) -> LexiconError {
    LexiconError::FormatError {
        line,
        message: message.to_string(),
    }
}

/// Parses the `%`-delimited lexicon file format.
pub fn parse_lexicon(name: &str, lexicon_text: &str) -> Result<Lexicon, LexiconError> {
    let lines: Vec<(usize, &str)> = lexicon_text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_start_matches('\u{feff}').trim_end()))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();

    let delimiters: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, (_, l))| l.trim() == "%")
        .map(|(i, _)| i)
        .collect();
    if delimiters.len() != 2 || delimiters[0] != 0 {
        let line = lines.first().map_or(1, |(n, _)| *n);
        return Err(format_error(line, "expected a `%` line, the category block, a `%` line, then entries"));
    }

    let mut categories = Vec::new();
    let mut id_to_index: HashMap<u32, usize> = HashMap::new();
    for &(line_no, line) in &lines[1..delimiters[1]] {
        let mut fields = line.split('\t').map(str::trim);
        let id_text = fields.next().unwrap_or_default();
        let id: u32 = id_text
            .parse()
            .map_err(|_| format_error(line_no, &format!("non-numeric category id {id_text:?}")))?;
        let cat_name = fields
            .next()
            .filter(|n| !n.is_empty())
            .ok_or_else(|| format_error(line_no, "category line needs `id<TAB>name`"))?;
        if id_to_index.insert(id, categories.len()).is_some() {
            return Err(format_error(line_no, &format!("duplicate category id {id}")));
        }
        if categories.iter().any(|c| c == cat_name) {
            return Err(format_error(line_no, &format!("duplicate category name {cat_name:?}")));
        }
        categories.push(cat_name.to_string());
    }

    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for &(line_no, line) in &lines[delimiters[1] + 1..] {
        let mut fields = line.split('\t');
        let pattern_text = fields.next().unwrap_or_default().trim();
        let pattern = Pattern::parse(pattern_text).map_err(|m| format_error(line_no, &m))?;
        let mut cats = Vec::new();
        for f in fields.map(str::trim).filter(|f| !f.is_empty()) {
            let id: u32 = f
                .parse()
                .map_err(|_| format_error(line_no, &format!("non-numeric category id {f:?}")))?;
            let idx = *id_to_index
                .get(&id)
                .ok_or_else(|| format_error(line_no, &format!("undeclared category id {id}")))?;
            if !cats.contains(&idx) {
                cats.push(idx);
            }
        }
        if cats.is_empty() {
            return Err(format_error(line_no, "entry has no category ids"));
        }
        if !seen.insert(pattern.clone()) {
            return Err(format_error(line_no, &format!("duplicate pattern {pattern}")));
        }
        entries.push(Entry {
            pattern,
            categories: cats,
        });
    }

    Lexicon::new(name, categories, entries)
}

const STRESS_LEXICON_TEXT: &str = include_str!("stress.dic");

/// The four-category distress dictionary: debt, distress, restructure, healthy.
pub fn stress_lexicon() -> Lexicon {
    parse_lexicon("stress", STRESS_LEXICON_TEXT).expect("bundled stress lexicon is well formed")
}

pub fn stress_lexicon_text() -> &'static str {
    STRESS_LEXICON_TEXT
}
