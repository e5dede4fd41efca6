use std::collections::HashSet;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::Args;
use datarank::core::eval::{UsageJoin, UsageKind};
use datarank::ingest::{
    detect_figshare_dois, filter_figshare_by_type, parse_edge_file, parse_figshare_metadata, parse_genbank_flatfile,
    parse_node_file, parse_usage_table, MalformedRow,
};
use datarank::manifest::RunManifest;
use datarank::snapshot::save_snapshot;
use datarank_core::{prune_by_year, GraphBuilder, GraphError, NodeKind};
use log::{info, warn};

use super::{finish_manifest, sidecar, write_with};

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// Node list(s): `external_id,kind,year`.
    #[arg(long)]
    nodes: Vec<PathBuf>,
    /// Edge list(s): `citing_id,cited_id`.
    #[arg(long)]
    edges: Vec<PathBuf>,
    /// GenBank flat file(s); every record becomes a dataset node.
    #[arg(long)]
    genbank: Vec<PathBuf>,
    /// Figshare `doi,type_code` export; type-3 items become datasets.
    #[arg(long)]
    figshare_metadata: Option<PathBuf>,
    /// Usage table(s) to check against the graph's datasets.
    #[arg(long)]
    usage: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "visits")]
    usage_kind: UsageKindArg,
    /// Keep only nodes published in or before this year.
    #[arg(long)]
    max_year: Option<i32>,
    /// Year ages are measured from; defaults to the newest node's year.
    #[arg(long)]
    reference_year: Option<i32>,
    /// Snapshot to write.
    #[arg(long)]
    out: PathBuf,
    /// Build report; defaults to `<out>.report.csv`.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum UsageKindArg {
    Visits,
    Downloads,
}

impl From<UsageKindArg> for UsageKind {
    fn from(k: UsageKindArg) -> Self {
        match k {
            UsageKindArg::Visits => UsageKind::Visits,
            UsageKindArg::Downloads => UsageKind::Downloads,
        }
    }
}

/// `source,path,metric,value` rows.
#[derive(Default)]
struct Report(Vec<[String; 4]>);

impl Report {
    fn add(&mut self, source: &str, path: &Path, metric: &str, value: impl ToString) {
        self.0.push([
            source.into(),
            path.display().to_string(),
            metric.into(),
            value.to_string(),
        ]);
    }

    fn total(&mut self, metric: &str, value: impl ToString) {
        self.0
            .push(["total".into(), String::new(), metric.into(), value.to_string()]);
    }

    fn write(&self, path: &Path) -> anyhow::Result<()> {
        write_with(path, |w| {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(["source", "path", "metric", "value"])?;
            for row in &self.0 {
                csv.write_record(row)?;
            }
            csv.flush()
        })
    }
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn warn_malformed(path: &Path, rows: &[MalformedRow]) {
    for m in rows.iter().take(20) {
        warn!("{}:{}: skipped malformed row: {}", path.display(), m.line, m.reason);
    }
    if rows.len() > 20 {
        warn!("{}: {} more malformed rows", path.display(), rows.len() - 20);
    }
}

pub fn run(args: BuildArgs) -> anyhow::Result<()> {
    let started = Instant::now();
    let mut manifest = RunManifest::new("build");
    let mut report = Report::default();

    // Figshare items typed as datasets, compared case-insensitively.
    let mut figshare_datasets = HashSet::new();
    if let Some(path) = &args.figshare_metadata {
        manifest.input(path);
        let rows = parse_figshare_metadata(open(path)?).with_context(|| format!("reading {}", path.display()))?;
        let datasets = filter_figshare_by_type(&rows);
        report.add("figshare", path, "metadata_rows", rows.len());
        report.add("figshare", path, "type3_datasets", datasets.len());
        figshare_datasets.extend(datasets.iter().map(|d| d.to_ascii_lowercase()));
    }

    let mut builder = GraphBuilder::new();
    // Ids dropped for lacking a year; edges touching them are dropped too.
    let mut skipped: HashSet<String> = HashSet::new();
    let mut relabeled = 0u64;
    let mut figshare_candidates = 0usize;

    for path in &args.nodes {
        manifest.input(path);
        let mut rows = parse_node_file(open(path)?).with_context(|| format!("reading {}", path.display()))?;
        let mut ids_seen = Vec::new();
        for item in rows.by_ref() {
            let (line, mut rec) = item.with_context(|| format!("reading {}", path.display()))?;
            if !figshare_datasets.is_empty() && figshare_datasets.contains(&rec.external_id.to_ascii_lowercase()) {
                if rec.kind != NodeKind::Dataset {
                    relabeled += 1;
                }
                rec.kind = NodeKind::Dataset;
            }
            if args.figshare_metadata.is_some() {
                ids_seen.push(rec.external_id.clone());
            }
            builder
                .add_node(&rec)
                .with_context(|| format!("{}:{line}", path.display()))?;
        }
        figshare_candidates += detect_figshare_dois(ids_seen.iter().map(String::as_str)).len();
        let r = rows.into_report();
        warn_malformed(path, &r.malformed);
        r.check().with_context(|| format!("reading {}", path.display()))?;
        report.add("nodes", path, "rows", r.rows);
        report.add("nodes", path, "nodes", r.accepted);
        report.add("nodes", path, "skipped_missing_year", r.skipped_missing_year);
        report.add("nodes", path, "malformed_rows", r.malformed.len());
        skipped.extend(r.skipped_ids);
    }
    if let Some(path) = &args.figshare_metadata {
        report.add("figshare", path, "figshare_ids_in_node_files", figshare_candidates);
        report.add("figshare", path, "relabeled_as_dataset", relabeled);
    }

    for path in &args.genbank {
        manifest.input(path);
        let mut records = parse_genbank_flatfile(open(path)?);
        for rec in records.by_ref() {
            let rec = rec.with_context(|| format!("reading {}", path.display()))?;
            builder
                .add_node(&rec)
                .with_context(|| format!("{}: record {}", path.display(), rec.external_id))?;
        }
        let r = records.into_report();
        warn_malformed(path, &r.malformed);
        report.add("genbank", path, "records", r.records);
        report.add("genbank", path, "nodes", r.accepted);
        report.add(
            "genbank",
            path,
            "skipped_no_submission_date",
            r.skipped_no_submission_date,
        );
        report.add("genbank", path, "malformed_records", r.malformed.len());
        skipped.extend(r.skipped_ids);
    }

    let dataset_index = |b: &GraphBuilder, id: &str| b.index_of(id).filter(|&i| b.kind(i) == NodeKind::Dataset);
    for path in &args.edges {
        manifest.input(path);
        let mut rows = parse_edge_file(open(path)?).with_context(|| format!("reading {}", path.display()))?;
        let (mut added, mut dropped_skipped, mut dropped_figshare) = (0u64, 0u64, 0u64);
        for item in rows.by_ref() {
            let (line, (citing, cited)) = item.with_context(|| format!("reading {}", path.display()))?;
            if skipped.contains(&citing) || skipped.contains(&cited) {
                dropped_skipped += 1;
                continue;
            }
            if !figshare_datasets.is_empty()
                && figshare_datasets.contains(&citing.to_ascii_lowercase())
                && dataset_index(&builder, &citing).is_some()
            {
                dropped_figshare += 1;
                continue;
            }
            match builder.add_edge(&citing, &cited) {
                Ok(()) => added += 1,
                Err(e @ (GraphError::UnknownEndpoint(_) | GraphError::DatasetCites(_))) => {
                    return Err(e).with_context(|| format!("{}:{line}: edge {citing} -> {cited}", path.display()));
                }
                Err(e) => return Err(e.into()),
            }
        }
        let r = rows.into_report();
        warn_malformed(path, &r.malformed);
        r.check().with_context(|| format!("reading {}", path.display()))?;
        report.add("edges", path, "rows", r.rows);
        report.add("edges", path, "edges_accepted", added);
        report.add("edges", path, "dropped_endpoint_without_year", dropped_skipped);
        report.add("edges", path, "dropped_figshare_dataset_citing", dropped_figshare);
        report.add("edges", path, "malformed_rows", r.malformed.len());
    }

    let (mut graph, stats) = builder.finish(args.reference_year).context("finalizing graph")?;
    report.total("self_loops_dropped", stats.self_loops_dropped);
    report.total("duplicate_edges_dropped", stats.duplicate_edges_dropped);
    if let Some(max_year) = args.max_year {
        report.total("nodes_before_max_year", graph.n_nodes());
        report.total("edges_before_max_year", graph.n_edges());
        graph = prune_by_year(&graph, max_year);
        manifest.param("max_year", max_year);
    }
    let datasets = graph.count_kind(NodeKind::Dataset);
    report.total("nodes", graph.n_nodes());
    report.total("publications", graph.n_nodes() - datasets);
    report.total("datasets", datasets);
    report.total("edges", graph.n_edges());
    report.total("reference_year", graph.reference_year());
    info!(
        "graph: {} nodes ({} datasets), {} edges",
        graph.n_nodes(),
        datasets,
        graph.n_edges()
    );

    for path in &args.usage {
        manifest.input(path);
        let table = parse_usage_table(open(path)?, args.usage_kind.into())
            .with_context(|| format!("reading {}", path.display()))?;
        let join = UsageJoin::resolve(&graph, &table);
        report.add("usage", path, "entries", table.len());
        report.add("usage", path, "matched", join.matched.len());
        report.add("usage", path, "unmatched_usage_ids", join.unmatched_usage);
        report.add("usage", path, "datasets_without_usage", join.unmatched_datasets);
        if join.matched.is_empty() {
            warn!("{}: no usage id matches a dataset in the graph", path.display());
        }
    }

    if graph.is_empty() {
        warn!("the graph has no nodes");
    }
    let fingerprint = save_snapshot(&graph, &args.out).with_context(|| format!("writing {}", args.out.display()))?;
    let report_path = sidecar(args.report, &args.out, ".report.csv");
    report.write(&report_path)?;

    manifest.param("reference_year", graph.reference_year());
    manifest.param("usage_kind", UsageKind::from(args.usage_kind).to_string());
    manifest.output(&args.out);
    manifest.output(&report_path);
    manifest.graph_fingerprint = Some(fingerprint);
    manifest.result("nodes", graph.n_nodes());
    manifest.result("edges", graph.n_edges());
    manifest.result("datasets", datasets);
    finish_manifest(manifest, started, &args.out)
}
