pub mod data;
pub mod ingest;
pub mod model;
pub mod report;
pub mod text;

use std::collections::BTreeMap;

/// `"TooShort 2, SectionNotFound 1"` style tally.
pub(crate) fn tally(counts: &BTreeMap<&'static str, usize>) -> String {
    counts
        .iter()
        .map(|(k, v)| format!("{k} {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}
