//! Word-set files: one word per line, a bit string optionally followed by a
//! decimal payload id. `#` lines and blank lines are skipped.

use std::fmt::Write as _;

use thiserror::Error;

use crate::bits::{BitString, BitsError};
use crate::engine::{EngineError, WordArray};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordSetError {
    #[error("line {line}: {source}")]
    Pattern { line: usize, source: BitsError },
    #[error("line {line}: invalid payload id {text:?}")]
    Payload { line: usize, text: String },
    #[error("line {line}: unexpected trailing text {text:?}")]
    Trailing { line: usize, text: String },
    #[error("line {line}: word has {found} bits, expected {expected}")]
    WidthMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("word set contains no words")]
    Empty,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Parses a word-set file. The width is taken from the first word.
pub fn parse_word_set(text: &str) -> Result<WordArray, WordSetError> {
    let mut entries = Vec::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let pattern = fields.next().unwrap_or_default();
        let bits: BitString = pattern
            .parse()
            .map_err(|source| WordSetError::Pattern { line: line_no, source })?;
        let payload = match fields.next() {
            None => None,
            Some(text) => Some(text.parse::<u64>().map_err(|_| WordSetError::Payload {
                line: line_no,
                text: text.to_string(),
            })?),
        };
        if let Some(extra) = fields.next() {
            return Err(WordSetError::Trailing {
                line: line_no,
                text: extra.to_string(),
            });
        }
        let expected = *width.get_or_insert(bits.width());
        if bits.width() != expected {
            return Err(WordSetError::WidthMismatch {
                line: line_no,
                expected,
                found: bits.width(),
            });
        }
        entries.push((bits, payload));
    }
    let width = width.ok_or(WordSetError::Empty)?;
    Ok(WordArray::with_payloads(entries, width)?)
}

/// Writes the array back in word-set format.
pub fn format_word_set(array: &WordArray) -> String {
    let mut out = String::new();
    for word in array.words() {
        match word.payload() {
            Some(id) => writeln!(out, "{} {id}", word.bits()),
            None => writeln!(out, "{}", word.bits()),
        }
        .expect("writing to a String cannot fail");
    }
    out
}
