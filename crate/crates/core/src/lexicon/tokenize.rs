//! Word and sentence segmentation.
//!
//! A word is a maximal run of letters and digits; an apostrophe or hyphen
//! between two alphanumerics stays inside the word. Everything else is a
//! separator, and separators that are punctuation are counted for AllPunc.

/// Token stream plus the punctuation marks that fell outside tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Scan {
    pub tokens: Vec<String>,
    pub punctuation: usize,
}

pub fn tokenize(text: &str) -> Vec<String> {
    scan(text).tokens
}

pub fn scan(text: &str) -> Scan {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Scan::default();
    let mut current = String::new();

    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            current.extend(c.to_lowercase());
            continue;
        }
        let joiner = is_apostrophe(c) || c == '-';
        let next_alnum = chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if joiner && !current.is_empty() && next_alnum {
            current.push(if c == '-' { '-' } else { '\'' });
            continue;
        }
        if !current.is_empty() {
            out.tokens.push(std::mem::take(&mut current));
        }
        if is_punctuation(c) {
            out.punctuation += 1;
        }
    }
    if !current.is_empty() {
        out.tokens.push(current);
    }
    out
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{2018}')
}

pub fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(c,
            '\u{00A1}' | '\u{00A7}' | '\u{00AB}' | '\u{00B6}' | '\u{00B7}' | '\u{00BB}' | '\u{00BF}'
            | '\u{2010}'..='\u{2027}'
            | '\u{2030}'..='\u{205E}'
        )
}

/// Number of letters (digits and joiners excluded) in a token.
pub fn letter_count(token: &str) -> usize {
    token.chars().filter(|c| c.is_alphabetic()).count()
}

/// Splits at `.`, `!` or `?` runs followed by whitespace or end of text.
/// A period directly after a lone uppercase letter (an initial) does not
/// split; decimals never split because the period is followed by a digit.
/// Pieces without any alphanumeric character are dropped.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;

    while i < bytes.len() {
        let (_, c) = bytes[i];
        if !matches!(c, '.' | '!' | '?') {
            i += 1;
            continue;
        }
        let run_start = i;
        let mut j = i;
        while j < bytes.len() && matches!(bytes[j].1, '.' | '!' | '?') {
            j += 1;
        }
        while j < bytes.len() && matches!(bytes[j].1, '"' | '\'' | ')' | ']' | '\u{201D}' | '\u{2019}') {
            j += 1;
        }
        let at_boundary = j >= bytes.len() || bytes[j].1.is_whitespace();
        let initial = c == '.' && j - run_start == 1 && follows_initial(&bytes, run_start);
        if at_boundary && !initial {
            let end = if j < bytes.len() { bytes[j].0 } else { text.len() };
            push_piece(&mut sentences, &text[start..end]);
            start = end;
        }
        i = j;
    }
    push_piece(&mut sentences, &text[start..]);
    sentences
}

fn follows_initial(chars: &[(usize, char)], period: usize) -> bool {
    if period == 0 {
        return false;
    }
    let prev = chars[period - 1].1;
    let before_ok = period < 2 || !chars[period - 2].1.is_alphanumeric();
    prev.is_uppercase() && before_ok
}

fn push_piece<'a>(out: &mut Vec<&'a str>, piece: &'a str) {
    let piece = piece.trim();
    if piece.chars().any(char::is_alphanumeric) {
        out.push(piece);
    }
}
