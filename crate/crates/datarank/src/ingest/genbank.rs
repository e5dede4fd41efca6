//! Streaming GenBank flat-file reader.
//!
//! Only two facts are taken from each record: the first token of the
//! ACCESSION line and the year of the `Submitted (DD-MMM-YYYY)` date in the
//! JOURNAL of the last REFERENCE block. State is reset at every `//`, so
//! memory does not grow with the file.

use std::io::BufRead;
use std::sync::LazyLock;

use datarank_core::{NodeKind, NodeRecord};
use regex::Regex;

use super::delimited::MalformedRow;
use super::{normalize_accession, IngestError};

static SUBMITTED: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"Submitted\s*\(\s*\d{1,2}-[A-Za-z]{3}-(\d{4})\s*\)").unwrap());

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenbankReport {
    pub records: u64,
    pub accepted: u64,
    pub skipped_no_submission_date: u64,
    pub skipped_ids: Vec<String>,
    /// Records without an ACCESSION line, by first line.
    pub malformed: Vec<MalformedRow>,
}

#[derive(Default)]
struct Record {
    first_line: u64,
    has_content: bool,
    accession: Option<String>,
    last_journal: Option<String>,
    in_journal: bool,
}

pub struct GenbankRecords<R> {
    input: R,
    line: String,
    line_no: u64,
    record: Record,
    report: GenbankReport,
    done: bool,
}

impl<R: BufRead> GenbankRecords<R> {
    pub fn report(&self) -> &GenbankReport {
        &self.report
    }

    pub fn into_report(self) -> GenbankReport {
        self.report
    }

    fn close_record(&mut self) -> Option<NodeRecord> {
        let rec = std::mem::take(&mut self.record);
        if !rec.has_content {
            return None;
        }
        self.report.records += 1;
        let Some(accession) = rec.accession else {
            self.report.malformed.push(MalformedRow {
                line: rec.first_line,
                reason: "record has no ACCESSION line".into(),
            });
            return None;
        };
        let year = rec
            .last_journal
            .as_deref()
            .and_then(|j| SUBMITTED.captures(j))
            .and_then(|c| c[1].parse::<i32>().ok());
        match year {
            Some(year) => {
                self.report.accepted += 1;
                Some(NodeRecord::new(accession, NodeKind::Dataset, year))
            }
            None => {
                self.report.skipped_no_submission_date += 1;
                self.report.skipped_ids.push(accession);
                None
            }
        }
    }

    fn take_line(&mut self) {
        let line = self.line.trim_end_matches(['\r', '\n']);
        let rec = &mut self.record;
        if line.trim().is_empty() {
            return;
        }
        if !rec.has_content {
            rec.has_content = true;
            rec.first_line = self.line_no;
        }
        if let Some(rest) = line.strip_prefix("ACCESSION") {
            rec.in_journal = false;
            if rec.accession.is_none() {
                rec.accession = rest
                    .split_whitespace()
                    .next()
                    .map(|t| normalize_accession(t).to_owned());
            }
        } else if line.starts_with("REFERENCE") {
            rec.in_journal = false;
            rec.last_journal = None;
        } else if let Some(rest) = line.strip_prefix("  JOURNAL") {
            rec.in_journal = true;
            rec.last_journal = Some(rest.trim().to_owned());
        } else if rec.in_journal && line.starts_with("            ") {
            if let Some(j) = rec.last_journal.as_mut() {
                j.push(' ');
                j.push_str(line.trim());
            }
        } else {
            rec.in_journal = false;
        }
    }
}

impl<R: BufRead> Iterator for GenbankRecords<R> {
    type Item = Result<NodeRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.line.clear();
            match self.input.read_line(&mut self.line) {
                Ok(0) => {
                    self.done = true;
                    if let Some(r) = self.close_record() {
                        return Some(Ok(r));
                    }
                }
                Ok(_) => {
                    self.line_no += 1;
                    if self.line.trim_end() == "//" {
                        if let Some(r) = self.close_record() {
                            return Some(Ok(r));
                        }
                    } else {
                        self.take_line();
                    }
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            }
        }
        None
    }
}

/// Dataset records from concatenated flat-file records. Records without a
/// submission date and records without an ACCESSION line are skipped and
/// counted in [`GenbankRecords::report`].
pub fn parse_genbank_flatfile<R: BufRead>(input: R) -> GenbankRecords<R> {
    GenbankRecords {
        input,
        line: String::new(),
        line_no: 0,
        record: Record::default(),
        report: GenbankReport::default(),
        done: false,
    }
}
