use chrono::NaiveDate;

use super::{FilingRecord, IngestError};

/// Number of lines before the first data record in a standard `master.idx`
/// (description block, blank line, column header, dashed rule).
pub const MASTER_INDEX_HEADER_LINES: usize = 11;

/// Outcome of parsing one master index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IndexParse {
    pub records: Vec<FilingRecord>,
    /// Well-formed data lines whose form type did not match the filter.
    pub filtered: usize,
    /// Lines that looked like data but failed to parse.
    pub skipped: usize,
    /// Header, rule and blank lines.
    pub header_lines: usize,
}

impl IndexParse {
    pub fn line_count(&self) -> usize {
        self.records.len() + self.filtered + self.skipped + self.header_lines
    }
}

/// Parses a master index keeping `10-K` records.
pub fn parse_master_index(index_text: &str) -> Result<IndexParse, IngestError> {
    parse_master_index_with(index_text, &["10-K"])
}

/// Parses a master index keeping records whose form type equals one of
/// `form_types` (exact match, so `10-K/A` amendments are not included by `10-K`).
/// An empty `form_types` keeps every record.
///
/// The master index is a free-text preamble followed by
/// `CIK|Company Name|Form Type|Date Filed|Filename` records. Lines before the
/// dashed rule, the column header, and blank lines count as header lines.
/// Malformed data lines are counted in `skipped`.
pub fn parse_master_index_with(
    index_text: &str,
    form_types: &[&str],
) -> Result<IndexParse, IngestError> {
    let mut out = IndexParse::default();
    let has_rule = index_text.lines().any(is_rule);
    let mut in_body = !has_rule;
    let mut data_lines = 0usize;

    for line in index_text.lines() {
        if !in_body {
            out.header_lines += 1;
            if is_rule(line) {
                in_body = true;
            }
            continue;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() || is_rule(line) || is_column_header(trimmed) {
            out.header_lines += 1;
            continue;
        }
        data_lines += 1;
        match parse_line(trimmed) {
            Some(record) => {
                if form_types.is_empty() || form_types.iter().any(|f| *f == record.form_type) {
                    out.records.push(record);
                } else {
                    out.filtered += 1;
                }
            }
            None => out.skipped += 1,
        }
    }

    if data_lines == 0 {
        return Err(IngestError::EmptyIndex);
    }
    Ok(out)
}

fn is_rule(line: &str) -> bool {
    let t = line.trim();
    t.len() >= 3 && t.chars().all(|c| c == '-')
}

fn is_column_header(line: &str) -> bool {
    line.to_ascii_lowercase().starts_with("cik|")
}

fn parse_line(line: &str) -> Option<FilingRecord> {
    let fields: Vec<&str> = line.split('|').collect();
    if fields.len() != 5 {
        return None;
    }
    let cik: u64 = fields[0].trim().parse().ok().filter(|&c| c > 0)?;
    let company_name = fields[1].trim().to_string();
    let form_type = fields[2].trim().to_string();
    let date_filed = parse_index_date(fields[3].trim())?;
    let path = fields[4].trim().to_string();
    if form_type.is_empty() || path.is_empty() {
        return None;
    }
    Some(FilingRecord {
        cik,
        company_name,
        form_type,
        date_filed,
        path,
    })
}

// Current indices use ISO dates; some 1990s indices use YYYYMMDD.
fn parse_index_date(s: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(s, "%Y%m%d"))
        .ok()
}
