use std::collections::HashMap;

use chrono::NaiveDate;

use super::{BankruptcyEvent, Chapter, FilingRecord, IngestError, Label};

pub const DEFAULT_HORIZON_DAYS: u32 = 365;

/// Parses a `cik,petition_date,chapter` file. A leading header line is
/// recognised by a non-numeric first field; blank lines are ignored.
/// Row numbers in errors are 1-based file line numbers.
pub fn load_bankruptcy_labels(label_text: &str) -> Result<Vec<BankruptcyEvent>, IngestError> {
    let mut events = Vec::new();
    for (idx, line) in label_text.lines().enumerate() {
        let row = idx + 1;
        let line = line.trim_start_matches('\u{feff}').trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if idx == 0 && fields[0].parse::<u64>().is_err() {
            continue;
        }
        let err = |message: String| IngestError::ParseError { row, message };
        if fields.len() != 3 {
            return Err(err(format!("expected 3 fields, found {}", fields.len())));
        }
        let cik: u64 = fields[0]
            .parse()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| err(format!("invalid cik {:?}", fields[0])))?;
        let filing_date = NaiveDate::parse_from_str(fields[1], "%Y-%m-%d")
            .map_err(|_| err(format!("invalid date {:?}", fields[1])))?;
        let chapter = fields[2]
            .parse::<u8>()
            .ok()
            .and_then(Chapter::from_number)
            .ok_or_else(|| err(format!("chapter must be 7 or 11, got {:?}", fields[2])))?;
        events.push(BankruptcyEvent {
            cik,
            filing_date,
            chapter,
        });
    }
    Ok(events)
}

/// Labels each filing 1 when the same CIK has a petition strictly after the
/// filing date and at most `horizon_days` later.
pub fn label_filings(
    filings: &[FilingRecord],
    events: &[BankruptcyEvent],
    horizon_days: u32,
) -> Result<Vec<(FilingRecord, Label)>, IngestError> {
    if horizon_days == 0 {
        return Err(IngestError::InvalidArgument("horizon_days must be > 0".into()));
    }
    let mut by_cik: HashMap<u64, Vec<NaiveDate>> = HashMap::new();
    for e in events {
        by_cik.entry(e.cik).or_default().push(e.filing_date);
    }
    Ok(filings
        .iter()
        .map(|f| {
            let hit = by_cik.get(&f.cik).is_some_and(|dates| {
                dates.iter().any(|&d| {
                    let days = (d - f.date_filed).num_days();
                    days > 0 && days <= i64::from(horizon_days)
                })
            });
            let label = Label {
                value: u8::from(hit),
                horizon_days,
            };
            (f.clone(), label)
        })
        .collect())
}
