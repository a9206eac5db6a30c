use std::sync::LazyLock;

use log::debug;
use regex::{Captures, Regex};

use super::{CleanFiling, TextError};
use crate::ingest::RawFiling;

static DOCUMENT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?is)<DOCUMENT>(.*?)</DOCUMENT>").unwrap());
static DOC_TYPE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?im)^\s*<TYPE>\s*([^\s<]+)").unwrap());
static DOC_FILENAME: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?im)^\s*<FILENAME>\s*([^\s<]+)").unwrap());
static SEC_HEADER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?is)<(SEC|IMS)-HEADER>.*?</(SEC|IMS)-HEADER>").unwrap());
static SGML_FIELD: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?im)^\s*<(TYPE|SEQUENCE|FILENAME|DESCRIPTION)>.*$").unwrap());
static UUENCODED: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?ms)^begin [0-7]{3,4} [^\n]*\n.*?^end[ \t]*$").unwrap());
static BASE64_LINE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?m)^[ \t]*[A-Za-z0-9+/]{60,}={0,2}[ \t]*$").unwrap());
static NON_TEXT_BLOCK: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?is)<!--.*?-->|<script\b.*?</script\s*>|<style\b.*?</style\s*>|<ix:header>.*?</ix:header>|<xbrl>.*?</xbrl>")
        .unwrap()
});
static BLOCK_TAG: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)<\s*/?\s*(p|div|br|tr|li|ul|ol|h[1-6]|table|hr|page|center|pre|title|text|document)\b[^<>]*>")
        .unwrap()
});
static CELL_TAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)<\s*/?\s*(td|th)\b[^<>]*>").unwrap());
static ANY_TAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"<\s*/?\s*[A-Za-z!?][^<>]*>").unwrap());
static INLINE_SPACE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[^\S\n]+").unwrap());
static BLANK_RUN: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\n{3,}").unwrap());

const BINARY_TYPES: [&str; 7] = ["GRAPHIC", "ZIP", "PDF", "EXCEL", "XML", "JSON", "XBRL"];
const BINARY_EXTENSIONS: [&str; 12] = [
    ".jpg", ".jpeg", ".gif", ".png", ".pdf", ".zip", ".xls", ".xlsx", ".xml", ".xsd", ".json", ".js",
];

fn is_binary_document(doc: &str) -> bool {
    let doc_type = DOC_TYPE
        .captures(doc)
        .map(|c| c[1].to_ascii_uppercase())
        .unwrap_or_default();
    if BINARY_TYPES.contains(&doc_type.as_str()) || doc_type.starts_with("EX-101") {
        return true;
    }
    DOC_FILENAME.captures(doc).is_some_and(|c| {
        let name = c[1].to_ascii_lowercase();
        BINARY_EXTENSIONS.iter().any(|ext| name.ends_with(ext))
    })
}

// Numeric references such as `&#146;` decode to C1 controls; read them as
// the Windows-1252 punctuation that filers meant.
fn map_c1_control(c: char) -> char {
    match c {
        '\u{0085}' => '\u{2026}',
        '\u{0091}' => '\u{2018}',
        '\u{0092}' => '\u{2019}',
        '\u{0093}' => '\u{201C}',
        '\u{0094}' => '\u{201D}',
        '\u{0095}' => '\u{2022}',
        '\u{0096}' => '\u{2013}',
        '\u{0097}' => '\u{2014}',
        '\u{0080}'..='\u{009F}' => ' ',
        other => other,
    }
}

/// Removes markup, encoded binaries and non-text documents from a full
/// submission, decodes entities and normalises whitespace. Line structure is
/// kept; each line has single spaces and at most one blank line separates
/// paragraphs.
pub fn strip_markup_text(raw: &str) -> String {
    let text = DOCUMENT.replace_all(raw, |c: &Captures| {
        if is_binary_document(&c[1]) {
            String::new()
        } else {
            format!("\n{}\n", &c[1])
        }
    });
    let text = SEC_HEADER.replace_all(&text, "\n");
    let text = UUENCODED.replace_all(&text, "");
    let text = BASE64_LINE.replace_all(&text, "");
    let text = NON_TEXT_BLOCK.replace_all(&text, " ");
    let text = SGML_FIELD.replace_all(&text, "");
    let text = BLOCK_TAG.replace_all(&text, "\n");
    let text = CELL_TAG.replace_all(&text, " ");
    let text = ANY_TAG.replace_all(&text, "");
    let decoded = html_escape::decode_html_entities(&text);
    // Entity-escaped markup becomes real tags only after decoding.
    let text = ANY_TAG.replace_all(&decoded, "");
    let text: String = text.chars().map(map_c1_control).collect();
    let text = text.replace(['\u{00A0}', '\u{200B}', '\r', '\u{000C}'], " ");
    let text = INLINE_SPACE.replace_all(&text, " ");
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    let joined = lines.join("\n");
    let text = BLANK_RUN.replace_all(&joined, "\n\n");
    text.trim().to_string()
}

/// [`strip_markup_text`] that rejects output without any alphanumeric text.
pub fn clean_text(raw: &str) -> Result<String, TextError> {
    let text = strip_markup_text(raw);
    if text.chars().any(char::is_alphanumeric) {
        Ok(text)
    } else {
        Err(TextError::EmptyAfterClean)
    }
}

pub fn strip_markup(raw: &RawFiling) -> Result<CleanFiling, TextError> {
    let text = clean_text(&raw.body)?;
    let removed_fraction = if raw.body.is_empty() {
        0.0
    } else {
        (1.0 - text.len() as f64 / raw.body.len() as f64).clamp(0.0, 1.0)
    };
    debug!(
        "cleaned {}: removed {:.1}% of bytes",
        raw.record.path,
        100.0 * removed_fraction
    );
    Ok(CleanFiling {
        record: raw.record.clone(),
        text,
        removed_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::FilingRecord;
    use chrono::NaiveDate;

    fn raw(body: &str) -> RawFiling {
        RawFiling::new(
            FilingRecord {
                cik: 1,
                company_name: "A".into(),
                form_type: "10-K".into(),
                date_filed: NaiveDate::from_ymd_opt(2000, 1, 1).unwrap(),
                path: "edgar/data/1/a.txt".into(),
            },
            body.into(),
        )
    }

    #[test]
    fn removes_tags() {
        assert_eq!(strip_markup_text("<html><b>Net loss</b> of $5</html>"), "Net loss of $5");
    }

    #[test]
    fn decodes_entities() {
        assert_eq!(strip_markup_text("&amp; amendment"), "& amendment");
        assert_eq!(strip_markup_text("a&nbsp;&nbsp;b &#8217; &lt;5%"), "a b \u{2019} <5%");
    }

    #[test]
    fn escaped_markup_does_not_survive() {
        assert_eq!(strip_markup_text("x &lt;b&gt;y&lt;/b&gt; z"), "x y z");
    }

    #[test]
    fn graphic_block_only_is_empty() {
        let body = "<DOCUMENT>\n<TYPE>GRAPHIC\n<SEQUENCE>2\n<FILENAME>g1.jpg\n<TEXT>\nbegin 644 g1.jpg\nM_]C_X``02D9)1@`!`0$`8`!@``#_VP!#``@&!@<&!0@'!P<)\"0@*#!0-#`L+\n`\nend\n</TEXT>\n</DOCUMENT>\n";
        let err = strip_markup(&raw(body)).unwrap_err();
        assert_eq!(err, TextError::EmptyAfterClean);
    }

    #[test]
    fn keeps_text_documents_and_drops_binaries() {
        let body = "<SEC-HEADER>ACCESSION NUMBER: 1\n</SEC-HEADER>\n\
<DOCUMENT>\n<TYPE>10-K\n<SEQUENCE>1\n<FILENAME>d10k.htm\n<TEXT>\n<html><p>Item 7.&nbsp;Management&#146;s</p><table><tr><td>Revenue</td><td>5</td></tr></table></html>\n</TEXT>\n</DOCUMENT>\n\
<DOCUMENT>\n<TYPE>EX-101.INS\n<SEQUENCE>9\n<FILENAME>x.xml\n<TEXT>\n<xbrl>secret numbers</xbrl>\n</TEXT>\n</DOCUMENT>\n\
<DOCUMENT>\n<TYPE>ZIP\n<SEQUENCE>10\n<FILENAME>x.zip\n<TEXT>\nbegin 644 x.zip\nMUEsDBBQ\nend\n</TEXT>\n</DOCUMENT>\n";
        let clean = strip_markup(&raw(body)).unwrap();
        assert!(clean.text.contains("Item 7. Management\u{2019}s"));
        assert!(clean.text.contains("Revenue 5"));
        assert!(!clean.text.contains("secret"));
        assert!(!clean.text.contains("ACCESSION"));
        assert!(!clean.text.contains("d10k"));
        assert!(!clean.text.contains('<'));
        assert!(clean.removed_fraction > 0.5 && clean.removed_fraction <= 1.0);
    }

    #[test]
    fn base64_lines_and_scripts_removed() {
        let b64 = "QUJDREVGR0hJSktMTU5PUFFSU1RVVldYWVphYmNkZWZnaGlqa2xtbm9wcXJzdHV2d3h5ejAxMjM0NTY3ODk=";
        let body = format!("Keep this.\n{b64}\n<script>var x = 1;</script><style>p {{}}</style>and this");
        assert_eq!(strip_markup_text(&body), "Keep this.\n\nand this");
    }

    #[test]
    fn whitespace_normalised_within_lines() {
        assert_eq!(strip_markup_text("a \t  b\n\n\n\n  c  "), "a b\n\nc");
    }

    #[test]
    fn removed_fraction_bounds() {
        let clean = strip_markup(&raw("plain text")).unwrap();
        assert_eq!(clean.removed_fraction, 0.0);
    }
}
