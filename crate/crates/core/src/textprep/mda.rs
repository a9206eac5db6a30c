//! MD&A location.
//!
//! Every `Item 7` heading (but not `Item 7A`) opens a candidate span that runs
//! to the next `Item 7A` heading, or to the next `Item 8` heading when no
//! `Item 7A` follows it. Table-of-contents entries produce near-empty
//! candidates, so the longest candidate wins.

use std::ops::Range;
use std::sync::LazyLock;

use regex::Regex;

use super::{CleanFiling, ExtractionRule, MdaDocument, TextError};
use crate::lexicon::tokenize;

pub const MIN_MDA_WORDS: usize = 100;

static ITEM_7: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bitem\s*7\b").unwrap());
static ITEM_7A: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bitem\s*7\s*a\b").unwrap());
static ITEM_8: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bitem\s*8\b").unwrap());
static SPLIT_7A_SUFFIX: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)^\s*a\b").unwrap());
static BY_REFERENCE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\bincorporated\s+(?:herein\s+)?by\s+reference\b").unwrap());

/// Byte offsets of a located MD&A within the cleaned text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdaSpan {
    /// The extracted text, after the `Item 7` anchor and before the end anchor.
    pub text: Range<usize>,
    /// The `Item 7` anchor that opened the span.
    pub anchor: Range<usize>,
    pub rule: ExtractionRule,
}

const HEADING_PUNCT: &[char] = &['.', ':', '-', '\u{2013}', '\u{2014}'];

/// Finds the longest `Item 7` span without applying the word threshold.
pub fn locate_mda(text: &str) -> Result<MdaSpan, TextError> {
    let starts: Vec<Range<usize>> = ITEM_7
        .find_iter(text)
        .filter(|m| !SPLIT_7A_SUFFIX.is_match(&text[m.end()..]))
        .map(|m| m.range())
        .collect();
    if starts.is_empty() {
        return Err(TextError::SectionNotFound);
    }
    let ends_7a: Vec<usize> = ITEM_7A.find_iter(text).map(|m| m.start()).collect();
    let ends_8: Vec<usize> = ITEM_8.find_iter(text).map(|m| m.start()).collect();

    let mut best: Option<MdaSpan> = None;
    for anchor in starts {
        let after = |ends: &[usize]| ends.iter().copied().find(|&e| e >= anchor.end);
        let (end, rule) = match (after(&ends_7a), after(&ends_8)) {
            (Some(e), _) => (e, ExtractionRule::Item7To7A),
            (None, Some(e)) => (e, ExtractionRule::Item7ToItem8),
            (None, None) => continue,
        };
        let body = &text[anchor.end..end];
        let lead = body.len() - body.trim_start_matches(|c: char| c.is_whitespace() || HEADING_PUNCT.contains(&c)).len();
        let body_start = anchor.end + lead;
        let body_end = anchor.end + body.trim_end().len().max(lead);
        let candidate = MdaSpan {
            text: body_start..body_end,
            anchor,
            rule,
        };
        if best.as_ref().is_none_or(|b| candidate.text.len() > b.text.len()) {
            best = Some(candidate);
        }
    }
    best.ok_or(TextError::SectionNotFound)
}

pub fn extract_mda(clean: &CleanFiling) -> Result<MdaDocument, TextError> {
    extract_mda_with(clean, MIN_MDA_WORDS)
}

/// Extracts the MD&A and rejects it when it has fewer than `min_words` words.
pub fn extract_mda_with(clean: &CleanFiling, min_words: usize) -> Result<MdaDocument, TextError> {
    let (text, word_count, extraction_rule) = extract_mda_text(&clean.text, min_words)?;
    Ok(MdaDocument {
        record: clean.record.clone(),
        text: text.to_string(),
        word_count,
        extraction_rule,
    })
}

/// Text-level extraction: the MD&A slice of `text`, its word count and the
/// rule that ended it.
pub fn extract_mda_text(text: &str, min_words: usize) -> Result<(&str, usize, ExtractionRule), TextError> {
    let span = locate_mda(text)?;
    let mda = &text[span.text];
    let word_count = tokenize(mda).len();
    if word_count < min_words {
        return Err(if BY_REFERENCE.is_match(mda) {
            TextError::IncorporatedByReference(word_count)
        } else {
            TextError::TooShort(word_count)
        });
    }
    Ok((mda, word_count, span.rule))
}
