//! GenBank accession mentions in free text.
//!
//! An accession is one uppercase letter and five digits or two uppercase
//! letters and six digits, optionally followed by a `.N` version. A match
//! only counts when the characters on both sides are not alphanumeric, so
//! `P12345X` and `xU00096` yield nothing. Two accessions joined by a hyphen
//! or en dash form a range that is expanded in full.

use std::sync::LazyLock;

use regex::Regex;

use super::IngestError;

/// Largest range expanded; longer ranges are reported and only their
/// endpoints kept.
pub const MAX_RANGE_LEN: u64 = 10_000;

static CANDIDATE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[A-Z]{1,2}[0-9]{5,6}(?:\.[0-9]+)?").unwrap());
static RANGE_DASH: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*[-\u{2013}]\s*").unwrap());

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessionMention {
    /// Unversioned accession.
    pub accession: String,
    pub source_document_id: String,
    /// Character offsets `[start, end)` of the mention; every member of an
    /// expanded range carries the span of the whole range.
    pub span: (usize, usize),
    pub from_range: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeIssue {
    pub start: String,
    pub end: String,
    pub span: (usize, usize),
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extraction {
    pub mentions: Vec<AccessionMention>,
    /// Accessions mentioned on their own, including endpoints of rejected
    /// ranges.
    pub single_mentions: usize,
    /// Ranges that were expanded.
    pub range_mentions: usize,
    pub rejected_ranges: Vec<RangeIssue>,
}

/// Exact format check on an unversioned accession.
pub fn is_accession(s: &str) -> bool {
    let b = s.as_bytes();
    let letters = b.iter().take_while(|c| c.is_ascii_uppercase()).count();
    let digits = &b[letters..];
    let ok_digits = digits.iter().all(u8::is_ascii_digit);
    ok_digits && matches!((letters, digits.len()), (1, 5) | (2, 6))
}

/// Strips a `.N` version from a versioned accession; anything else is
/// returned unchanged.
pub fn normalize_accession(s: &str) -> &str {
    match s.split_once('.') {
        Some((base, version))
            if is_accession(base) && !version.is_empty() && version.bytes().all(|c| c.is_ascii_digit()) =>
        {
            base
        }
        _ => s,
    }
}

fn split_accession(s: &str) -> Result<(&str, &str), IngestError> {
    if !is_accession(s) {
        return Err(IngestError::InvalidAccession(s.to_owned()));
    }
    let letters = s.bytes().take_while(u8::is_ascii_uppercase).count();
    Ok(s.split_at(letters))
}

/// Every accession from `start` to `end` inclusive.
pub fn expand_accession_range(start: &str, end: &str) -> Result<Vec<String>, IngestError> {
    let (p1, d1) = split_accession(start)?;
    let (p2, d2) = split_accession(end)?;
    if p1 != p2 || d1.len() != d2.len() {
        return Err(IngestError::PrefixMismatch {
            start: start.into(),
            end: end.into(),
        });
    }
    let (a, b): (u64, u64) = (d1.parse().unwrap(), d2.parse().unwrap());
    if b < a {
        return Err(IngestError::InvertedRange {
            start: start.into(),
            end: end.into(),
        });
    }
    let len = b - a + 1;
    if len > MAX_RANGE_LEN {
        return Err(IngestError::RangeTooLarge {
            start: start.into(),
            end: end.into(),
            len,
        });
    }
    let width = d1.len();
    Ok((a..=b).map(|n| format!("{p1}{n:0width$}")).collect())
}

/// Unversioned accession of a candidate match, if its surroundings allow it.
fn accept(text: &str, start: usize, end: usize) -> Option<&str> {
    let before = text[..start].chars().next_back();
    let after = text[end..].chars().next();
    if before.is_some_and(char::is_alphanumeric) || after.is_some_and(char::is_alphanumeric) {
        return None;
    }
    let core = normalize_accession(&text[start..end]);
    is_accession(core).then_some(core)
}

/// Byte to character offsets for monotonically increasing positions.
struct CharCursor<'t> {
    text: &'t str,
    byte: usize,
    chars: usize,
}

impl CharCursor<'_> {
    fn at(&mut self, byte: usize) -> usize {
        debug_assert!(byte >= self.byte);
        self.chars += self.text[self.byte..byte].chars().count();
        self.byte = byte;
        self.chars
    }
}

pub fn extract_accessions(text: &str, source_document_id: &str) -> Extraction {
    let mut out = Extraction::default();
    let mut cursor = CharCursor {
        text,
        byte: 0,
        chars: 0,
    };
    let mention = |accession: &str, span, from_range| AccessionMention {
        accession: accession.to_owned(),
        source_document_id: source_document_id.to_owned(),
        span,
        from_range,
    };
    let mut pos = 0;
    while let Some(m) = CANDIDATE.find_at(text, pos) {
        pos = m.end();
        let Some(first) = accept(text, m.start(), m.end()) else {
            continue;
        };
        let second = RANGE_DASH.find(&text[m.end()..]).and_then(|dash| {
            let at = m.end() + dash.end();
            let m2 = CANDIDATE.find_at(text, at).filter(|m2| m2.start() == at)?;
            accept(text, m2.start(), m2.end()).map(|acc| (acc, m2))
        });
        let span_start = cursor.at(m.start());
        match second {
            None => {
                let span = (span_start, cursor.at(m.end()));
                out.mentions.push(mention(first, span, false));
                out.single_mentions += 1;
            }
            Some((last, m2)) => {
                pos = m2.end();
                let first_end = cursor.at(m.end());
                let second_start = cursor.at(m2.start());
                let span = (span_start, cursor.at(m2.end()));
                match expand_accession_range(first, last) {
                    Ok(all) => {
                        out.mentions.extend(all.iter().map(|a| mention(a, span, true)));
                        out.range_mentions += 1;
                    }
                    Err(e) => {
                        out.rejected_ranges.push(RangeIssue {
                            start: first.to_owned(),
                            end: last.to_owned(),
                            span,
                            reason: e.to_string(),
                        });
                        out.mentions.push(mention(first, (span_start, first_end), false));
                        out.mentions.push(mention(last, (second_start, span.1), false));
                        out.single_mentions += 2;
                    }
                }
            }
        }
    }
    out
}
