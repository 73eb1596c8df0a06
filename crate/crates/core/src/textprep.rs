//! Input normalization.
//!
//! Every name that enters the system, whether from a corpus file, a patch,
//! or a query, goes through [`clean`] first. The result is a [`CleanName`]:
//! Arabic letters only, words separated by exactly one space, nothing at the
//! edges.
//!
//! Hamza carriers (`أ إ آ ؤ ئ`) are composed into single scalar values but
//! are *not* folded onto their bare letters; that equivalence is a variant
//! rule, not a normalization.

use std::borrow::Borrow;
use std::fmt;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CleanError {
    #[error("name is empty after cleaning: {raw:?}")]
    EmptyAfterCleaning { raw: String },
}

/// A preprocessed name, the key type used throughout the crate.
///
/// Ordering is code-point order, which is what byte order of UTF-8 gives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CleanName(String);

impl CleanName {
    /// Cleans `raw` into a name. Same as [`clean`].
    pub fn new(raw: &str) -> Result<Self, CleanError> {
        clean(raw)
    }

    /// Accepts `text` only if it is already in cleaned form.
    pub fn parse_exact(text: &str) -> Option<Self> {
        is_clean(text).then(|| CleanName(text.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Length in Unicode scalar values.
    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn chars(&self) -> Vec<char> {
        self.0.chars().collect()
    }

    pub fn is_compound(&self) -> bool {
        is_compound(self)
    }
}

impl fmt::Display for CleanName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for CleanName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for CleanName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl std::str::FromStr for CleanName {
    type Err = CleanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        clean(s)
    }
}

/// Letters of the Arabic block (and Arabic Supplement) that can appear in a
/// name. Tatweel and every combining mark are excluded.
pub fn is_arabic_letter(c: char) -> bool {
    matches!(c,
        '\u{0620}'..='\u{063F}'
        | '\u{0641}'..='\u{064A}'
        | '\u{066E}'..='\u{066F}'
        | '\u{0671}'..='\u{06D3}'
        | '\u{06D5}'
        | '\u{06EE}'..='\u{06EF}'
        | '\u{06FA}'..='\u{06FC}'
        | '\u{06FF}'
        | '\u{0750}'..='\u{077F}')
}

fn is_clean(text: &str) -> bool {
    if text.is_empty() || text.starts_with(' ') || text.ends_with(' ') || text.contains("  ") {
        return false;
    }
    text.chars().all(|c| c == ' ' || is_arabic_letter(c))
}

/// Normalizes a raw name.
///
/// Composition runs first so a bare alif followed by a combining hamza
/// becomes `أ`. After that, Arabic letters are kept in order, any run of
/// whitespace becomes a single separator, and everything else (digits,
/// punctuation, Latin letters, tatweel, diacritics) is dropped.
pub fn clean(raw: &str) -> Result<CleanName, CleanError> {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for c in raw.nfc() {
        if c.is_whitespace() {
            pending_space = true;
        } else if is_arabic_letter(c) {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        }
    }
    if out.is_empty() {
        return Err(CleanError::EmptyAfterCleaning { raw: raw.to_owned() });
    }
    Ok(CleanName(out))
}

/// True when the name has more than one word.
pub fn is_compound(name: &CleanName) -> bool {
    name.0.contains(' ')
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn collapses_and_trims_spaces() {
        assert_eq!(clean(" عبد  الله ").unwrap().as_str(), "عبد الله");
    }

    #[test]
    fn already_clean_is_identity() {
        assert_eq!(clean("احمد").unwrap().as_str(), "احمد");
    }

    #[test]
    fn nothing_left() {
        assert_eq!(
            clean("*!123"),
            Err(CleanError::EmptyAfterCleaning { raw: "*!123".into() })
        );
        assert!(clean("   ").is_err());
        assert!(clean("").is_err());
    }

    #[test]
    fn drops_tatweel_diacritics_and_latin() {
        // fatha + shadda + tatweel
        assert_eq!(clean("مُحَمّـد").unwrap().as_str(), "محمد");
        assert_eq!(clean("Ahmad احمد 7").unwrap().as_str(), "احمد");
        assert_eq!(clean("عبد-الله").unwrap().as_str(), "عبدالله");
    }

    #[test]
    fn composes_combining_hamza() {
        // alif + combining hamza above
        let name = clean("\u{0627}\u{0654}حمد").unwrap();
        assert_eq!(name.as_str(), "أحمد");
        assert_eq!(name.char_len(), 4);
    }

    #[test]
    fn keeps_hamza_carriers() {
        assert_eq!(clean("إبراهيم").unwrap().as_str(), "إبراهيم");
        assert_eq!(clean("داؤد").unwrap().as_str(), "داؤد");
    }

    #[test]
    fn removed_characters_between_words_do_not_double_spaces() {
        assert_eq!(clean("عبد 1 الله").unwrap().as_str(), "عبد الله");
        assert_eq!(clean("\tعبد\nالله\u{00A0}").unwrap().as_str(), "عبد الله");
    }

    #[test]
    fn compound_detection() {
        assert!(clean("ضيف الله").unwrap().is_compound());
        assert!(!clean("احمد").unwrap().is_compound());
        assert!(is_compound(&clean("بهاء الدين").unwrap()));
    }

    #[test]
    fn parse_exact_rejects_unclean() {
        assert!(CleanName::parse_exact("احمد").is_some());
        assert!(CleanName::parse_exact(" احمد").is_none());
        assert!(CleanName::parse_exact("عبد  الله").is_none());
        assert!(CleanName::parse_exact("احمد1").is_none());
    }

    fn messy_input() -> impl Strategy<Value = String> {
        let pieces = prop_oneof![
            Just("ا"), Just("أ"), Just("ب"), Just("ة"), Just("ى"), Just("ء"),
            Just(" "), Just("  "), Just("\t"), Just("ـ"), Just("\u{064E}"),
            Just("\u{0654}"), Just("1"), Just("x"), Just("-"), Just("!"),
        ];
        proptest::collection::vec(pieces, 0..24).prop_map(|v| v.concat())
    }

    proptest! {
        #[test]
        fn idempotent(raw in messy_input()) {
            if let Ok(once) = clean(&raw) {
                let twice = clean(once.as_str()).unwrap();
                prop_assert_eq!(once, twice);
            }
        }

        #[test]
        fn never_grows_and_output_is_clean(raw in messy_input()) {
            if let Ok(name) = clean(&raw) {
                prop_assert!(name.char_len() <= raw.chars().count());
                prop_assert!(is_clean(name.as_str()));
                for c in name.as_str().chars() {
                    prop_assert!(c == ' ' || is_arabic_letter(c));
                }
            }
        }

        #[test]
        fn arbitrary_unicode_never_panics(raw in ".*") {
            if let Ok(name) = clean(&raw) {
                prop_assert!(is_clean(name.as_str()));
            }
        }
    }
}
