//! EDGAR ingestion: quarterly master-index parsing, rate-limited filing
//! download with an on-disk cache, and bankruptcy label files.

mod fetch;
mod index;
mod labels;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fetch::{
    write_atomic, Clock, Fetcher, HttpResponse, HttpTransport, RateLimiter, SystemClock, Transport,
    DEFAULT_RATE_LIMIT, EDGAR_ARCHIVES_URL, MAX_ATTEMPTS,
};
pub use index::{parse_master_index, parse_master_index_with, IndexParse, MASTER_INDEX_HEADER_LINES};
pub use labels::{label_filings, load_bankruptcy_labels, DEFAULT_HORIZON_DAYS};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("master index contains no data lines")]
    EmptyIndex,
    #[error("not found: {0}")]
    NotFound(String),
    #[error("transport error after {attempts} attempt(s): {message}")]
    TransportError { attempts: u32, message: String },
    #[error("unexpected HTTP status {status} for {url}")]
    HttpStatus { status: u16, url: String },
    #[error("label file row {row}: {message}")]
    ParseError { row: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty body for {0}")]
    EmptyBody(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl IngestError {
    pub fn name(&self) -> &'static str {
        match self {
            IngestError::EmptyIndex => "EmptyIndex",
            IngestError::NotFound(_) => "NotFound",
            IngestError::TransportError { .. } => "TransportError",
            IngestError::HttpStatus { .. } => "HttpStatus",
            IngestError::ParseError { .. } => "ParseError",
            IngestError::InvalidArgument(_) => "InvalidArgument",
            IngestError::EmptyBody(_) => "EmptyBody",
            IngestError::Io(_) => "Io",
        }
    }
}

/// One entry of an EDGAR master index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FilingRecord {
    pub cik: u64,
    pub company_name: String,
    pub form_type: String,
    pub date_filed: NaiveDate,
    /// Archive-relative path, e.g. `edgar/data/320193/0000320193-18-000145.txt`.
    pub path: String,
}

impl FilingRecord {
    /// Accession number derived from the file name of `path`.
    pub fn accession(&self) -> String {
        let file = self.path.rsplit('/').next().unwrap_or(&self.path);
        file.strip_suffix(".txt").unwrap_or(file).to_string()
    }

    pub fn key(&self) -> FilingKey {
        FilingKey {
            cik: self.cik,
            accession: self.accession(),
        }
    }
}

/// Join key shared by every stage after ingestion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FilingKey {
    pub cik: u64,
    pub accession: String,
}

impl std::fmt::Display for FilingKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.cik, self.accession)
    }
}

/// A fetched full-submission text.
#[derive(Debug, Clone)]
pub struct RawFiling {
    pub record: FilingRecord,
    pub body: String,
    pub fetched_at: DateTime<Utc>,
    pub byte_length: usize,
}

impl RawFiling {
    pub fn new(record: FilingRecord, body: String) -> Self {
        let byte_length = body.len();
        Self {
            record,
            body,
            fetched_at: Utc::now(),
            byte_length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chapter {
    Seven,
    Eleven,
}

impl Chapter {
    pub fn number(self) -> u8 {
        match self {
            Chapter::Seven => 7,
            Chapter::Eleven => 11,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            7 => Some(Chapter::Seven),
            11 => Some(Chapter::Eleven),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankruptcyEvent {
    pub cik: u64,
    pub filing_date: NaiveDate,
    pub chapter: Chapter,
}

/// Binary outcome: 1 when the firm petitioned within `horizon_days` of the filing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Label {
    pub value: u8,
    pub horizon_days: u32,
}
