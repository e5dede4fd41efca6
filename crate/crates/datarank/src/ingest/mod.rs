//! Parsers for every external input: node and edge lists, GenBank flat
//! files, Figshare metadata, usage tables and full-text documents.

mod accession;
mod delimited;
mod figshare;
mod genbank;
mod pmc;
mod usage;

pub use accession::{
    expand_accession_range, extract_accessions, is_accession, normalize_accession, AccessionMention, Extraction,
    RangeIssue, MAX_RANGE_LEN,
};
pub use delimited::{parse_edge_file, parse_node_file, EdgeRows, MalformedRow, NodeRows, RowReport};
pub use figshare::{detect_figshare_dois, filter_figshare_by_type, parse_figshare_metadata, FIGSHARE_DATASET_TYPE};
pub use genbank::{parse_genbank_flatfile, GenbankRecords, GenbankReport};
pub use pmc::extract_pmc_fulltext;
pub use usage::{parse_id_map, parse_usage_table};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("every one of {rows} rows is malformed (first, line {first_line}: {first_reason})")]
    AllRowsMalformed {
        rows: u64,
        first_line: u64,
        first_reason: String,
    },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: u64, id: String },
    #[error("line {line}: negative count for `{id}`")]
    NegativeCount { line: u64, id: String },
    #[error("range {start}-{end}: letter prefix or digit width differs")]
    PrefixMismatch { start: String, end: String },
    #[error("range {start}-{end}: end precedes start")]
    InvertedRange { start: String, end: String },
    #[error("range {start}-{end}: {len} accessions exceeds the limit of {max}", max = MAX_RANGE_LEN)]
    RangeTooLarge { start: String, end: String, len: u64 },
    #[error("`{0}` is not a valid accession")]
    InvalidAccession(String),
    #[error("document has no pmid article-id")]
    MissingPmid,
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
