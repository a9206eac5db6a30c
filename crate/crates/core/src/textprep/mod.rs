//! Turning raw EDGAR submissions into plain text and locating the MD&A.

mod clean;
mod mda;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::FilingRecord;

pub use clean::{clean_text, strip_markup, strip_markup_text};
pub use mda::{extract_mda, extract_mda_text, extract_mda_with, locate_mda, MdaSpan, MIN_MDA_WORDS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("no text survives cleaning")]
    EmptyAfterClean,
    #[error("no ITEM 7 section found")]
    SectionNotFound,
    #[error("MD&A too short: {0} words")]
    TooShort(usize),
    #[error("MD&A incorporated by reference ({0} words)")]
    IncorporatedByReference(usize),
}

impl TextError {
    pub fn name(&self) -> &'static str {
        match self {
            TextError::EmptyAfterClean => "EmptyAfterClean",
            TextError::SectionNotFound => "SectionNotFound",
            TextError::TooShort(_) => "TooShort",
            TextError::IncorporatedByReference(_) => "IncorporatedByReference",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CleanFiling {
    pub record: FilingRecord,
    pub text: String,
    /// Share of the raw bytes removed by cleaning, in `[0, 1]`.
    pub removed_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtractionRule {
    /// From `Item 7` to the following `Item 7A`.
    Item7To7A,
    /// From `Item 7` to the following `Item 8` when no `Item 7A` follows.
    Item7ToItem8,
}

impl ExtractionRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ExtractionRule::Item7To7A => "ITEM7_TO_7A",
            ExtractionRule::Item7ToItem8 => "ITEM7_TO_ITEM8",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MdaDocument {
    pub record: FilingRecord,
    pub text: String,
    pub word_count: usize,
    pub extraction_rule: ExtractionRule,
}
