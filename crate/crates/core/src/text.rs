//! Tokenization shared by the embedder and the topic vocabulary.

use alloc::string::String;
use alloc::vec::Vec;

/// Lowercases `text` and splits it on every non-alphanumeric character.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            current.extend(ch.to_lowercase());
        } else if !current.is_empty() {
            tokens.push(core::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Inclusive n-gram range, e.g. `(1, 2)` for unigrams and bigrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct NgramRange {
    pub min: usize,
    pub max: usize,
}

impl NgramRange {
    pub const UNIGRAMS: NgramRange = NgramRange { min: 1, max: 1 };
    pub const UNI_BI: NgramRange = NgramRange { min: 1, max: 2 };

    pub fn new(min: usize, max: usize) -> crate::Result<Self> {
        if min == 0 || max < min {
            return Err(crate::Error::validation(
                "ngram_range",
                alloc::format!("invalid range ({min}, {max})"),
            ));
        }
        Ok(NgramRange { min, max })
    }
}

impl Default for NgramRange {
    fn default() -> Self {
        NgramRange::UNI_BI
    }
}

/// Space-joined n-grams of `tokens`, shortest first, in text order.
pub fn ngrams(tokens: &[String], range: NgramRange) -> Vec<String> {
    let mut out = Vec::new();
    for n in range.min..=range.max {
        if n > tokens.len() {
            break;
        }
        for window in tokens.windows(n) {
            out.push(window.join(" "));
        }
    }
    out
}

/// Tokens plus n-grams for a document.
pub fn terms(text: &str, range: NgramRange) -> Vec<String> {
    ngrams(&tokenize(text), range)
}

/// Capitalizes the first letter of every space-separated word.
pub fn title_case(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for (i, word) in text.split_whitespace().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let mut chars = word.chars();
        if let Some(first) = chars.next() {
            out.extend(first.to_uppercase());
            out.push_str(chars.as_str());
        }
    }
    out
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
