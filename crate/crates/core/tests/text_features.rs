mod common;

use mdarisk::lexicon::{count_features, featurize_text, parse_lexicon, stress_lexicon, tokenize};
use mdarisk::textprep::{clean_text, extract_mda_text, TextError};
use proptest::prelude::*;

#[test]
fn every_extraction_fixture_matches() {
    let names = common::fixture_names();
    assert!(names.len() >= 12, "only {} fixtures", names.len());
    let failures: Vec<String> = names.iter().filter_map(|n| common::check_fixture(n).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn short_mda_reports_its_word_count() {
    let body: String = (0..40).map(|i| format!("word{i} ")).collect();
    let text = format!("ITEM 7. MANAGEMENT'S DISCUSSION AND ANALYSIS\n{body}\nITEM 7A. MARKET RISK\nx");
    assert_eq!(extract_mda_text(&clean_text(&text).unwrap(), 100), Err(TextError::TooShort(44)));
}

/// Hand-assigned stress categories (debt, distress, restructure, healthy)
/// for single words, read off the bundled dictionary's patterns.
const VOCAB: [(&str, [usize; 4]); 14] = [
    ("borrowings", [1, 0, 0, 0]),
    ("amendments", [1, 1, 0, 0]),
    ("covenants", [0, 1, 0, 0]),
    ("losses", [0, 1, 0, 0]),
    ("restructuring", [0, 0, 1, 0]),
    ("alternatives", [0, 0, 1, 0]),
    ("cash", [0, 0, 0, 1]),
    ("cashflow", [0, 0, 0, 0]),
    ("profits", [0, 0, 0, 1]),
    ("meet", [0, 0, 0, 1]),
    ("meeting", [0, 0, 0, 0]),
    ("secured", [1, 0, 0, 0]),
    ("securedness", [0, 0, 0, 0]),
    ("revenue", [0, 0, 0, 0]),
];

fn doc() -> impl Strategy<Value = Vec<(usize, &'static str)>> {
    let sep = prop::sample::select(vec![" ", ", ", ". ", "\n", " (", ") ", "; "]);
    prop::collection::vec((0..VOCAB.len(), sep), 1..120)
}

fn render(words: &[(usize, &str)]) -> String {
    words.iter().map(|&(w, s)| format!("{}{s}", VOCAB[w].0)).collect()
}

proptest! {
    #[test]
    fn stress_counts_match_hand_labels(words in doc()) {
        let text = render(&words);
        let counts = count_features(&text, &[stress_lexicon()]).unwrap();
        let mut expected = [0usize; 4];
        for &(w, _) in &words {
            for (e, c) in expected.iter_mut().zip(VOCAB[w].1) {
                *e += c;
            }
        }
        let got: Vec<usize> = counts.categories.iter().map(|(_, n)| *n).collect();
        prop_assert_eq!(got, expected.to_vec());
        prop_assert_eq!(counts.words, words.len());
    }

    #[test]
    fn percentages_are_bounded_and_consistent(words in doc()) {
        let text = render(&words);
        let v = featurize_text(&text, &[stress_lexicon()]).unwrap();
        prop_assert_eq!(v.wc, tokenize(&text).len());
        for (_, pct) in &v.categories {
            prop_assert!((0.0..=100.0).contains(pct));
        }
        prop_assert!((0.0..=100.0).contains(&v.sixltr));
        prop_assert!(v.wps > 0.0 && v.allpunc >= 0.0);
    }

    #[test]
    fn counts_add_over_concatenation(a in doc(), b in doc()) {
        let (ta, tb) = (render(&a), render(&b));
        let lex = [stress_lexicon()];
        let ca = count_features(&ta, &lex).unwrap();
        let cb = count_features(&tb, &lex).unwrap();
        let cab = count_features(&format!("{ta}\n{tb}"), &lex).unwrap();
        prop_assert_eq!(cab.words, ca.words + cb.words);
        prop_assert_eq!(cab.six_letter_words, ca.six_letter_words + cb.six_letter_words);
        for i in 0..4 {
            prop_assert_eq!(cab.categories[i].1, ca.categories[i].1 + cb.categories[i].1);
        }
    }

    #[test]
    fn tokens_are_lowercase_words_and_retokenize_to_themselves(text in "[ -~\u{2019}\u{e9}\u{fc}]{0,200}") {
        let toks = tokenize(&text);
        for t in &toks {
            prop_assert!(!t.is_empty());
            prop_assert!(t.chars().next().unwrap().is_alphanumeric());
            prop_assert!(t.chars().last().unwrap().is_alphanumeric());
            prop_assert!(t.chars().all(|c| c.is_alphanumeric() || c == '\'' || c == '-'));
        }
        prop_assert_eq!(tokenize(&toks.join(" ")), toks.clone());
        prop_assert_eq!(tokenize(&text.to_uppercase()), toks);
    }
}

#[test]
fn custom_lexicon_phrases_take_the_longest_match() {
    let lex = parse_lexicon("t", "%\n1\trisk\n%\ncredit\t1\ncredit risk\t1\n").unwrap();
    let c = count_features("Credit risk and credit.", &[lex]).unwrap();
    assert_eq!(c.categories, vec![("risk".to_string(), 3)]);
}
