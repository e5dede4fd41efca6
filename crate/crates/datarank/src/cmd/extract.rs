use std::collections::{BTreeSet, HashMap};
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::Args;
use datarank::ingest::{extract_accessions, extract_pmc_fulltext, parse_id_map, Extraction};
use datarank::manifest::RunManifest;
use log::warn;
use rayon::prelude::*;

use super::{finish_manifest, sidecar, write_with};

#[derive(Args, Debug)]
pub struct ExtractArgs {
    /// Directory of PMC XML (`.xml`, `.nxml`) and plain-text (`.txt`) documents.
    #[arg(long)]
    corpus: PathBuf,
    /// Two-column `pmid,doi` file; mapped documents are cited by their DOI.
    #[arg(long)]
    pmid_doi_map: Option<PathBuf>,
    /// Edge rows `citing_id,accession`.
    #[arg(long)]
    out: PathBuf,
    /// Mention report; defaults to `<out>.report.csv`.
    #[arg(long)]
    report: Option<PathBuf>,
}

enum Doc {
    Xml,
    Text,
}

fn doc_type(path: &Path) -> Option<Doc> {
    match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
        "xml" | "nxml" => Some(Doc::Xml),
        "txt" => Some(Doc::Text),
        _ => None,
    }
}

/// Citing id and mentions of one document.
fn process(path: &Path, kind: &Doc) -> anyhow::Result<(String, Extraction)> {
    let text = fs::read_to_string(path)?;
    let (id, body) = match kind {
        Doc::Xml => extract_pmc_fulltext(&text)?,
        Doc::Text => {
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .context("file name is not UTF-8")?;
            (stem.to_owned(), text)
        }
    };
    let extraction = extract_accessions(&body, &id);
    Ok((id, extraction))
}

pub fn run(args: ExtractArgs) -> anyhow::Result<()> {
    let started = Instant::now();
    let mut manifest = RunManifest::new("extract");
    manifest.input(&args.corpus);
    let map: HashMap<String, String> = match &args.pmid_doi_map {
        Some(path) => {
            manifest.input(path);
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            parse_id_map(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?
        }
        None => HashMap::new(),
    };

    let mut files: Vec<(PathBuf, Doc)> = Vec::new();
    let mut ignored = 0usize;
    for entry in fs::read_dir(&args.corpus).with_context(|| format!("listing {}", args.corpus.display()))? {
        let path = entry?.path();
        match (path.is_file(), doc_type(&path)) {
            (true, Some(kind)) => files.push((path, kind)),
            _ => ignored += 1,
        }
    }
    files.sort_by(|a, b| a.0.cmp(&b.0));

    let results: Vec<_> = files.par_iter().map(|(path, kind)| process(path, kind)).collect();

    let mut edges = BTreeSet::new();
    let (mut failed, mut singles, mut ranges, mut from_ranges, mut rejected, mut mapped) = (0, 0, 0, 0, 0, 0);
    for ((path, _), result) in files.iter().zip(results) {
        let (id, ex) = match result {
            Ok(r) => r,
            Err(e) => {
                warn!("{}: {e:#}", path.display());
                failed += 1;
                continue;
            }
        };
        for issue in &ex.rejected_ranges {
            warn!(
                "{}: range {}-{} not expanded: {}",
                path.display(),
                issue.start,
                issue.end,
                issue.reason
            );
        }
        singles += ex.single_mentions;
        ranges += ex.range_mentions;
        from_ranges += ex.mentions.iter().filter(|m| m.from_range).count();
        rejected += ex.rejected_ranges.len();
        let citing = match map.get(&id) {
            Some(doi) => {
                mapped += 1;
                doi.clone()
            }
            None => id,
        };
        edges.extend(ex.mentions.into_iter().map(|m| (citing.clone(), m.accession)));
    }

    write_with(&args.out, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["citing_id", "accession"])?;
        for (citing, acc) in &edges {
            csv.write_record([citing, acc])?;
        }
        csv.flush()
    })?;
    let report_path = sidecar(args.report, &args.out, ".report.csv");
    let rows = [
        ("documents", files.len()),
        ("documents_failed", failed),
        ("files_ignored", ignored),
        ("documents_mapped_to_doi", mapped),
        ("single_mentions", singles),
        ("range_mentions", ranges),
        ("accessions_from_ranges", from_ranges),
        ("ranges_rejected", rejected),
        ("edges", edges.len()),
    ];
    write_with(&report_path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["metric", "value"])?;
        for (k, v) in rows {
            csv.write_record([k.to_string(), v.to_string()])?;
        }
        csv.flush()
    })?;

    manifest.output(&args.out);
    manifest.output(&report_path);
    for (k, v) in rows {
        manifest.result(k, v);
    }
    finish_manifest(manifest, started, &args.out)
}
