//! Streaming readers for the delimited node and edge lists.
//!
//! Both formats carry a header row; the delimiter is a tab if the header
//! contains one and a comma otherwise. Fields are trimmed and CRLF endings
//! are accepted. Bad rows are collected in a [`RowReport`] instead of
//! aborting the stream.

use std::io::{BufRead, BufReader, Read};

use csv::StringRecord;
use datarank_core::{NodeKind, NodeRecord};

use super::IngestError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedRow {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RowReport {
    /// Data rows read, header excluded.
    pub rows: u64,
    pub accepted: u64,
    pub skipped_missing_year: u64,
    /// Ids of the rows skipped for a missing year, so that edges touching
    /// them can be recognised.
    pub skipped_ids: Vec<String>,
    pub malformed: Vec<MalformedRow>,
}

impl RowReport {
    /// Malformed rows are tolerated unless no row at all was usable.
    pub fn check(&self) -> Result<(), IngestError> {
        match self.malformed.first() {
            Some(first) if self.malformed.len() as u64 == self.rows => Err(IngestError::AllRowsMalformed {
                rows: self.rows,
                first_line: first.line,
                first_reason: first.reason.clone(),
            }),
            _ => Ok(()),
        }
    }
}

/// Drops the CR of every CRLF pair. The csv reader accepts CRLF itself but
/// then miscounts line numbers.
struct StripCr<R> {
    inner: R,
    pending_cr: bool,
}

impl<R: BufRead> Read for StripCr<R> {
    fn read(&mut self, out: &mut [u8]) -> std::io::Result<usize> {
        let mut n = 0;
        while n == 0 && !out.is_empty() {
            let buf = self.inner.fill_buf()?;
            if buf.is_empty() {
                if std::mem::take(&mut self.pending_cr) {
                    out[0] = b'\r';
                    n = 1;
                }
                break;
            }
            if std::mem::take(&mut self.pending_cr) && buf[0] != b'\n' {
                out[0] = b'\r';
                n = 1;
            }
            let mut used = 0;
            while used < buf.len() && n < out.len() {
                let b = buf[used];
                used += 1;
                if b == b'\r' {
                    match buf.get(used) {
                        Some(b'\n') => continue,
                        Some(_) => {}
                        None => {
                            self.pending_cr = true;
                            break;
                        }
                    }
                }
                out[n] = b;
                n += 1;
            }
            self.inner.consume(used);
        }
        Ok(n)
    }
}

struct Rows<R: Read> {
    reader: Option<csv::Reader<StripCr<BufReader<R>>>>,
    record: StringRecord,
    report: RowReport,
}

impl<R: Read> Rows<R> {
    fn open(input: R, columns: usize) -> Result<Self, IngestError> {
        let mut buf = BufReader::new(input);
        let mut header = String::new();
        if buf.read_line(&mut header)? == 0 {
            return Ok(Self {
                reader: None,
                record: StringRecord::new(),
                report: RowReport::default(),
            });
        }
        let header = header.trim_start_matches('\u{feff}').trim_end_matches(['\r', '\n']);
        let delimiter = if header.contains('\t') { b'\t' } else { b',' };
        let found = header.split(delimiter as char).count();
        if found != columns {
            return Err(IngestError::MalformedRow {
                line: 1,
                reason: format!("header has {found} columns, expected {columns}"),
            });
        }
        let reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .delimiter(delimiter)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(StripCr {
                inner: buf,
                pending_cr: false,
            });
        Ok(Self {
            reader: Some(reader),
            record: StringRecord::new(),
            report: RowReport::default(),
        })
    }

    /// Next usable row. `parse` returns `Ok(Err(id))` for rows skipped on
    /// purpose (missing year) and `Err(reason)` for malformed ones.
    fn next_with<T>(
        &mut self,
        parse: impl Fn(&StringRecord) -> Result<Result<T, String>, String>,
    ) -> Option<Result<(u64, T), IngestError>> {
        loop {
            let reader = self.reader.as_mut()?;
            let line = match reader.read_record(&mut self.record) {
                Ok(false) => {
                    self.reader = None;
                    return None;
                }
                // The csv reader counts from the first line after the header.
                Ok(true) => self.record.position().map_or(0, |p| p.line()) + 1,
                Err(e) => {
                    let line = e.position().map_or(0, |p| p.line()) + 1;
                    match e.into_kind() {
                        csv::ErrorKind::Io(io) => {
                            self.reader = None;
                            return Some(Err(io.into()));
                        }
                        other => {
                            self.report.rows += 1;
                            self.report.malformed.push(MalformedRow {
                                line,
                                reason: format!("{other:?}"),
                            });
                            continue;
                        }
                    }
                }
            };
            self.report.rows += 1;
            match parse(&self.record) {
                Ok(Ok(value)) => {
                    self.report.accepted += 1;
                    return Some(Ok((line, value)));
                }
                Ok(Err(id)) => {
                    self.report.skipped_missing_year += 1;
                    self.report.skipped_ids.push(id);
                }
                Err(reason) => self.report.malformed.push(MalformedRow { line, reason }),
            }
        }
    }
}

fn expect_columns(record: &StringRecord, n: usize) -> Result<(), String> {
    if record.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} columns, found {}", record.len()))
    }
}

fn non_empty<'a>(record: &'a StringRecord, i: usize, what: &str) -> Result<&'a str, String> {
    match &record[i] {
        "" => Err(format!("empty {what}")),
        s => Ok(s),
    }
}

fn parse_node_row(record: &StringRecord) -> Result<Result<NodeRecord, String>, String> {
    expect_columns(record, 3)?;
    let id = non_empty(record, 0, "external_id")?;
    let kind: NodeKind = record[1].parse().map_err(|e| format!("{e}"))?;
    if record[2].is_empty() {
        return Ok(Err(id.to_owned()));
    }
    let year: i32 = record[2]
        .parse()
        .map_err(|_| format!("year `{}` is not an integer", &record[2]))?;
    Ok(Ok(NodeRecord::new(id, kind, year)))
}

fn parse_edge_row(record: &StringRecord) -> Result<Result<(String, String), String>, String> {
    expect_columns(record, 2)?;
    let citing = non_empty(record, 0, "citing id")?;
    let cited = non_empty(record, 1, "cited id")?;
    Ok(Ok((citing.to_owned(), cited.to_owned())))
}

/// `external_id,kind,year` rows, yielded with their line numbers.
pub struct NodeRows<R: Read>(Rows<R>);

impl<R: Read> NodeRows<R> {
    pub fn report(&self) -> &RowReport {
        &self.0.report
    }

    pub fn into_report(self) -> RowReport {
        self.0.report
    }
}

impl<R: Read> Iterator for NodeRows<R> {
    type Item = Result<(u64, NodeRecord), IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.0.next_with(parse_node_row)
    }
}

/// `citing_id,cited_id` rows in file order, with line numbers.
pub struct EdgeRows<R: Read>(Rows<R>);

impl<R: Read> EdgeRows<R> {
    pub fn report(&self) -> &RowReport {
        &self.0.report
    }

    pub fn into_report(self) -> RowReport {
        self.0.report
    }
}

impl<R: Read> Iterator for EdgeRows<R> {
    type Item = Result<(u64, (String, String)), IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.0.next_with(parse_edge_row)
    }
}

pub fn parse_node_file<R: Read>(input: R) -> Result<NodeRows<R>, IngestError> {
    Rows::open(input, 3).map(NodeRows)
}

pub fn parse_edge_file<R: Read>(input: R) -> Result<EdgeRows<R>, IngestError> {
    Rows::open(input, 2).map(EdgeRows)
}

/// Two-column rows where any malformed row is an error; used by the small
/// usage and metadata tables.
pub(crate) fn two_column_strict<R: Read>(input: R) -> Result<Vec<(u64, String, String)>, IngestError> {
    let mut rows = Rows::open(input, 2)?;
    let mut out = Vec::new();
    while let Some(item) = rows.next_with(|r| {
        expect_columns(r, 2)?;
        Ok(Ok((non_empty(r, 0, "id")?.to_owned(), r[1].to_owned())))
    }) {
        let (line, (a, b)) = item?;
        out.push((line, a, b));
    }
    if let Some(m) = rows.report.malformed.into_iter().next() {
        return Err(IngestError::MalformedRow {
            line: m.line,
            reason: m.reason,
        });
    }
    Ok(out)
}
