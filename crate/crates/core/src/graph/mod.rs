//! Immutable typed citation graph.
//!
//! An edge `j -> i` means node `j` cites node `i`. Forward adjacency lists
//! the nodes a node cites, reverse adjacency the nodes citing it. Both are
//! stored as CSR arrays sorted by neighbour index, so per-node sums over
//! either list run in a fixed order.

mod idmap;

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use idmap::IdMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum NodeKind {
    Publication = 0,
    Dataset = 1,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Publication => "publication",
            NodeKind::Dataset => "dataset",
        }
    }

    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(NodeKind::Publication),
            1 => Some(NodeKind::Dataset),
            _ => None,
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown node kind `{0}` (expected publication or dataset)")]
pub struct ParseKindError(pub String);

impl FromStr for NodeKind {
    type Err = ParseKindError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("publication") || t.eq_ignore_ascii_case("paper") || t.eq_ignore_ascii_case("pub") {
            Ok(NodeKind::Publication)
        } else if t.eq_ignore_ascii_case("dataset") || t.eq_ignore_ascii_case("data") {
            Ok(NodeKind::Dataset)
        } else {
            Err(ParseKindError(t.to_string()))
        }
    }
}

/// Ingestion-side node row, before index compaction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRecord {
    pub external_id: String,
    pub kind: NodeKind,
    pub year: Option<i32>,
}

impl NodeRecord {
    pub fn new(external_id: impl Into<String>, kind: NodeKind, year: i32) -> Self {
        Self {
            external_id: external_id.into(),
            kind,
            year: Some(year),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge references unknown node `{0}`")]
    UnknownEndpoint(String),
    #[error("dataset `{0}` appears as a citing endpoint")]
    DatasetCites(String),
    #[error("node `{0}` has no year")]
    MissingYear(String),
    #[error("node `{0}` is declared more than once")]
    DuplicateNode(String),
    #[error("empty external id")]
    EmptyId,
    #[error("reference year {reference} precedes node year {year}")]
    ReferenceYearTooEarly { reference: i32, year: i32 },
    #[error("node index {index} out of range ({n_nodes} nodes)")]
    IndexOutOfRange { index: usize, n_nodes: usize },
    #[error("graph exceeds 32-bit node indexing")]
    Capacity,
    #[error("inconsistent graph arrays: {0}")]
    Corrupt(&'static str),
}

/// Counters collected while building; nothing here is an error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub edges_seen: u64,
    pub self_loops_dropped: u64,
    pub duplicate_edges_dropped: u64,
}

/// Streaming graph assembler. Nodes must be added before the edges that
/// reference them.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    ids: IdMap,
    kinds: Vec<NodeKind>,
    years: Vec<i32>,
    edges: Vec<(u32, u32)>,
    stats: BuildStats,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(nodes: usize, edges: usize) -> Self {
        Self {
            kinds: Vec::with_capacity(nodes),
            years: Vec::with_capacity(nodes),
            edges: Vec::with_capacity(edges),
            ..Self::default()
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.kinds.len()
    }

    pub fn index_of(&self, external_id: &str) -> Option<u32> {
        self.ids.lookup(external_id)
    }

    pub fn kind(&self, index: u32) -> NodeKind {
        self.kinds[index as usize]
    }

    pub fn add_node(&mut self, record: &NodeRecord) -> Result<u32, GraphError> {
        let year = record
            .year
            .ok_or_else(|| GraphError::MissingYear(record.external_id.clone()))?;
        self.add_node_parts(&record.external_id, record.kind, year)
    }

    pub fn add_node_parts(&mut self, external_id: &str, kind: NodeKind, year: i32) -> Result<u32, GraphError> {
        if external_id.is_empty() {
            return Err(GraphError::EmptyId);
        }
        if self.kinds.len() >= u32::MAX as usize {
            return Err(GraphError::Capacity);
        }
        let idx = self
            .ids
            .insert(external_id)
            .map_err(|_| GraphError::DuplicateNode(external_id.to_string()))?;
        self.kinds.push(kind);
        self.years.push(year);
        Ok(idx)
    }

    /// Adds `citing -> cited`. Self-citations are counted and dropped.
    pub fn add_edge(&mut self, citing: &str, cited: &str) -> Result<(), GraphError> {
        let src = self
            .ids
            .lookup(citing)
            .ok_or_else(|| GraphError::UnknownEndpoint(citing.to_string()))?;
        let dst = self
            .ids
            .lookup(cited)
            .ok_or_else(|| GraphError::UnknownEndpoint(cited.to_string()))?;
        self.add_edge_indices(src, dst)
    }

    pub fn add_edge_indices(&mut self, citing: u32, cited: u32) -> Result<(), GraphError> {
        let n = self.kinds.len();
        for idx in [citing, cited] {
            if idx as usize >= n {
                return Err(GraphError::IndexOutOfRange {
                    index: idx as usize,
                    n_nodes: n,
                });
            }
        }
        if self.kinds[citing as usize] == NodeKind::Dataset {
            return Err(GraphError::DatasetCites(self.ids.get(citing as usize).to_string()));
        }
        self.stats.edges_seen += 1;
        if citing == cited {
            self.stats.self_loops_dropped += 1;
            return Ok(());
        }
        self.edges.push((citing, cited));
        Ok(())
    }

    /// Finalizes the graph. `reference_year` defaults to the latest node year.
    pub fn finish(self, reference_year: Option<i32>) -> Result<(CitationGraph, BuildStats), GraphError> {
        let GraphBuilder {
            ids,
            kinds,
            years,
            mut edges,
            mut stats,
        } = self;
        let n = kinds.len();
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        stats.duplicate_edges_dropped = (before - edges.len()) as u64;

        let mut fwd_offsets = vec![0usize; n + 1];
        for &(src, _) in &edges {
            fwd_offsets[src as usize + 1] += 1;
        }
        for i in 0..n {
            fwd_offsets[i + 1] += fwd_offsets[i];
        }
        let fwd_targets: Vec<u32> = edges.iter().map(|&(_, dst)| dst).collect();
        drop(edges);

        let reference_year = resolve_reference_year(&years, reference_year)?;
        let graph = CitationGraph::assemble(ids, kinds, years, fwd_offsets, fwd_targets, reference_year);
        Ok((graph, stats))
    }
}

fn resolve_reference_year(years: &[i32], requested: Option<i32>) -> Result<i32, GraphError> {
    let max = years.iter().copied().max();
    match (requested, max) {
        (Some(r), Some(m)) if r < m => Err(GraphError::ReferenceYearTooEarly { reference: r, year: m }),
        (Some(r), _) => Ok(r),
        (None, Some(m)) => Ok(m),
        (None, None) => Ok(0),
    }
}

/// Builds a finalized graph from node records and `(citing, cited)` id pairs.
pub fn build_graph<'a, N, E>(nodes: N, edges: E, reference_year: Option<i32>) -> Result<CitationGraph, GraphError>
where
    N: IntoIterator<Item = &'a NodeRecord>,
    E: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut builder = GraphBuilder::new();
    for record in nodes {
        builder.add_node(record)?;
    }
    for (citing, cited) in edges {
        builder.add_edge(citing, cited)?;
    }
    builder.finish(reference_year).map(|(g, _)| g)
}

#[derive(Clone)]
pub struct CitationGraph {
    ids: IdMap,
    kinds: Vec<NodeKind>,
    years: Vec<i32>,
    fwd_offsets: Vec<usize>,
    fwd_targets: Vec<u32>,
    rev_offsets: Vec<usize>,
    rev_sources: Vec<u32>,
    reference_year: i32,
}

impl fmt::Debug for CitationGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CitationGraph")
            .field("n_nodes", &self.n_nodes())
            .field("n_edges", &self.n_edges())
            .field("reference_year", &self.reference_year)
            .finish()
    }
}

impl CitationGraph {
    /// Trusted constructor: forward lists are sorted, deduplicated and valid.
    fn assemble(
        ids: IdMap,
        kinds: Vec<NodeKind>,
        years: Vec<i32>,
        fwd_offsets: Vec<usize>,
        fwd_targets: Vec<u32>,
        reference_year: i32,
    ) -> Self {
        let n = kinds.len();
        let mut rev_offsets = vec![0usize; n + 1];
        for &dst in &fwd_targets {
            rev_offsets[dst as usize + 1] += 1;
        }
        for i in 0..n {
            rev_offsets[i + 1] += rev_offsets[i];
        }
        let mut cursor = rev_offsets.clone();
        let mut rev_sources = vec![0u32; fwd_targets.len()];
        // Sources are visited in increasing order, so each reverse list comes out sorted.
        for src in 0..n {
            for &dst in &fwd_targets[fwd_offsets[src]..fwd_offsets[src + 1]] {
                let slot = &mut cursor[dst as usize];
                rev_sources[*slot] = src as u32;
                *slot += 1;
            }
        }
        Self {
            ids,
            kinds,
            years,
            fwd_offsets,
            fwd_targets,
            rev_offsets,
            rev_sources,
            reference_year,
        }
    }

    /// Rebuilds a graph from raw forward CSR arrays, checking every invariant.
    pub fn from_csr<I, S>(
        ids: I,
        kinds: Vec<NodeKind>,
        years: Vec<i32>,
        fwd_offsets: Vec<usize>,
        fwd_targets: Vec<u32>,
        reference_year: i32,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let n = kinds.len();
        if years.len() != n || fwd_offsets.len() != n + 1 {
            return Err(GraphError::Corrupt("array lengths disagree"));
        }
        if n > u32::MAX as usize {
            return Err(GraphError::Capacity);
        }
        let mut map = IdMap::new();
        for id in ids {
            let id = id.as_ref();
            if id.is_empty() {
                return Err(GraphError::EmptyId);
            }
            map.insert(id).map_err(|_| GraphError::DuplicateNode(id.to_string()))?;
        }
        if map.len() != n {
            return Err(GraphError::Corrupt("id count differs from node count"));
        }
        if fwd_offsets[0] != 0 || fwd_offsets[n] != fwd_targets.len() {
            return Err(GraphError::Corrupt("offsets do not span targets"));
        }
        for src in 0..n {
            let (lo, hi) = (fwd_offsets[src], fwd_offsets[src + 1]);
            if lo > hi {
                return Err(GraphError::Corrupt("offsets not monotone"));
            }
            let list = &fwd_targets[lo..hi];
            if !list.is_empty() && kinds[src] == NodeKind::Dataset {
                return Err(GraphError::DatasetCites(map.get(src).to_string()));
            }
            let mut prev: Option<u32> = None;
            for &dst in list {
                if dst as usize >= n {
                    return Err(GraphError::IndexOutOfRange {
                        index: dst as usize,
                        n_nodes: n,
                    });
                }
                if dst as usize == src {
                    return Err(GraphError::Corrupt("self-loop"));
                }
                if prev.is_some_and(|p| p >= dst) {
                    return Err(GraphError::Corrupt("adjacency not strictly sorted"));
                }
                prev = Some(dst);
            }
        }
        resolve_reference_year(&years, Some(reference_year))?;
        Ok(Self::assemble(
            map,
            kinds,
            years,
            fwd_offsets,
            fwd_targets,
            reference_year,
        ))
    }

    pub fn n_nodes(&self) -> usize {
        self.kinds.len()
    }

    pub fn n_edges(&self) -> usize {
        self.fwd_targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn reference_year(&self) -> i32 {
        self.reference_year
    }

    /// Same graph measured against a different epoch.
    pub fn with_reference_year(mut self, reference_year: i32) -> Result<Self, GraphError> {
        self.reference_year = resolve_reference_year(&self.years, Some(reference_year))?;
        Ok(self)
    }

    pub fn kind(&self, i: usize) -> NodeKind {
        self.kinds[i]
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    pub fn year(&self, i: usize) -> i32 {
        self.years[i]
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn external_id(&self, i: usize) -> &str {
        self.ids.get(i)
    }

    pub fn external_ids(&self) -> impl Iterator<Item = &str> + '_ {
        self.ids.iter()
    }

    pub fn index_of(&self, external_id: &str) -> Option<usize> {
        self.ids.lookup(external_id).map(|i| i as usize)
    }

    /// Nodes cited by `i`.
    pub fn cites(&self, i: usize) -> &[u32] {
        &self.fwd_targets[self.fwd_offsets[i]..self.fwd_offsets[i + 1]]
    }

    /// Nodes citing `i`.
    pub fn cited_by(&self, i: usize) -> &[u32] {
        &self.rev_sources[self.rev_offsets[i]..self.rev_offsets[i + 1]]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.fwd_offsets[i + 1] - self.fwd_offsets[i]
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.rev_offsets[i + 1] - self.rev_offsets[i]
    }

    /// Years between the node's publication and the reference year.
    pub fn age(&self, i: usize) -> Result<u32, GraphError> {
        if i >= self.n_nodes() {
            return Err(GraphError::IndexOutOfRange {
                index: i,
                n_nodes: self.n_nodes(),
            });
        }
        Ok((self.reference_year - self.years[i]) as u32)
    }

    pub fn count_kind(&self, kind: NodeKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    pub fn forward_csr(&self) -> (&[usize], &[u32]) {
        (&self.fwd_offsets, &self.fwd_targets)
    }

    pub fn reverse_csr(&self) -> (&[usize], &[u32]) {
        (&self.rev_offsets, &self.rev_sources)
    }

    /// All `(citing, cited)` index pairs in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_nodes()).flat_map(move |src| self.cites(src).iter().map(move |&dst| (src, dst as usize)))
    }
}

/// Keeps nodes with `year <= max_year` and the edges among them. Surviving
/// nodes keep their relative order; the reference year is unchanged.
pub fn prune_by_year(graph: &CitationGraph, max_year: i32) -> CitationGraph {
    let n = graph.n_nodes();
    let mut remap = vec![u32::MAX; n];
    let mut ids = IdMap::new();
    let mut kinds = Vec::new();
    let mut years = Vec::new();
    for (i, slot) in remap.iter_mut().enumerate() {
        if graph.years[i] <= max_year {
            *slot = kinds.len() as u32;
            ids.insert(graph.external_id(i)).expect("ids are unique");
            kinds.push(graph.kinds[i]);
            years.push(graph.years[i]);
        }
    }
    let mut fwd_offsets = Vec::with_capacity(kinds.len() + 1);
    fwd_offsets.push(0);
    let mut fwd_targets = Vec::new();
    for i in 0..n {
        if remap[i] == u32::MAX {
            continue;
        }
        // Remapping is monotone, so sortedness carries over.
        fwd_targets.extend(
            graph
                .cites(i)
                .iter()
                .map(|&d| remap[d as usize])
                .filter(|&d| d != u32::MAX),
        );
        fwd_offsets.push(fwd_targets.len());
    }
    CitationGraph::assemble(ids, kinds, years, fwd_offsets, fwd_targets, graph.reference_year)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, kind: NodeKind, year: i32) -> NodeRecord {
        NodeRecord::new(id, kind, year)
    }

    fn abd() -> Vec<NodeRecord> {
        vec![
            rec("A", NodeKind::Publication, 2010),
            rec("B", NodeKind::Publication, 2011),
            rec("D", NodeKind::Dataset, 2009),
        ]
    }

    #[test]
    fn builds_small_graph() {
        let nodes = abd();
        let g = build_graph(&nodes, [("B", "A"), ("B", "D"), ("A", "D")], None).unwrap();
        let b = g.index_of("B").unwrap();
        let d = g.index_of("D").unwrap();
        assert_eq!(g.out_degree(b), 2);
        assert_eq!(g.in_degree(d), 2);
        assert_eq!(g.out_degree(d), 0);
        assert_eq!(g.reference_year(), 2011);
        assert_eq!(g.n_edges(), 3);
    }

    #[test]
    fn dataset_cannot_cite() {
        let nodes = abd();
        let err = build_graph(&nodes, [("D", "A")], None).unwrap_err();
        assert_eq!(err, GraphError::DatasetCites("D".into()));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let nodes = abd();
        let mut b = GraphBuilder::new();
        for n in &nodes {
            b.add_node(n).unwrap();
        }
        for (s, t) in [("B", "A"), ("B", "A"), ("B", "D")] {
            b.add_edge(s, t).unwrap();
        }
        let (g, stats) = b.finish(None).unwrap();
        assert_eq!(g.out_degree(g.index_of("B").unwrap()), 2);
        assert_eq!(stats.duplicate_edges_dropped, 1);
    }

    #[test]
    fn self_loops_dropped_and_counted() {
        let nodes = abd();
        let mut b = GraphBuilder::new();
        for n in &nodes {
            b.add_node(n).unwrap();
        }
        b.add_edge("A", "A").unwrap();
        let (g, stats) = b.finish(None).unwrap();
        assert_eq!(g.n_edges(), 0);
        assert_eq!(stats.self_loops_dropped, 1);
    }

    #[test]
    fn unknown_endpoint_and_missing_year() {
        let nodes = abd();
        assert_eq!(
            build_graph(&nodes, [("B", "Z")], None).unwrap_err(),
            GraphError::UnknownEndpoint("Z".into())
        );
        let bad = [NodeRecord {
            external_id: "X".into(),
            kind: NodeKind::Publication,
            year: None,
        }];
        assert_eq!(
            build_graph(&bad, core::iter::empty(), None).unwrap_err(),
            GraphError::MissingYear("X".into())
        );
        let dup = [rec("X", NodeKind::Publication, 1), rec("X", NodeKind::Dataset, 2)];
        assert!(matches!(
            build_graph(&dup, core::iter::empty(), None),
            Err(GraphError::DuplicateNode(_))
        ));
    }

    #[test]
    fn reference_year_must_cover_nodes() {
        let nodes = [rec("P", NodeKind::Publication, 2019)];
        assert_eq!(
            build_graph(&nodes, core::iter::empty(), Some(2012)).unwrap_err(),
            GraphError::ReferenceYearTooEarly {
                reference: 2012,
                year: 2019
            }
        );
    }

    #[test]
    fn age_is_relative_to_reference_year() {
        let nodes = [
            rec("P", NodeKind::Publication, 2012),
            rec("Q", NodeKind::Publication, 2000),
        ];
        let g = build_graph(&nodes, core::iter::empty(), Some(2012)).unwrap();
        assert_eq!(g.age(0), Ok(0));
        assert_eq!(g.age(1), Ok(12));
        assert_eq!(g.age(2), Err(GraphError::IndexOutOfRange { index: 2, n_nodes: 2 }));
    }

    #[test]
    fn prune_keeps_old_nodes_and_induced_edges() {
        let nodes = [
            rec("old", NodeKind::Publication, 2010),
            rec("new", NodeKind::Publication, 2013),
            rec("ds", NodeKind::Dataset, 2008),
        ];
        let g = build_graph(&nodes, [("new", "old"), ("old", "ds"), ("new", "ds")], None).unwrap();
        let p = prune_by_year(&g, 2012);
        assert_eq!(p.n_nodes(), 2);
        assert_eq!(p.n_edges(), 1);
        assert_eq!(p.external_id(0), "old");
        assert_eq!(p.cites(0), &[1]);
        assert_eq!(p.cited_by(1), &[0]);

        let same = prune_by_year(&g, 2020);
        assert_eq!(same.n_nodes(), g.n_nodes());
        assert_eq!(same.n_edges(), g.n_edges());
        assert_eq!(prune_by_year(&g, 1900).n_nodes(), 0);
    }

    #[test]
    fn from_csr_rejects_bad_arrays() {
        let kinds = vec![NodeKind::Publication, NodeKind::Dataset];
        let years = vec![2000, 2000];
        assert_eq!(
            CitationGraph::from_csr(["a", "b"], kinds.clone(), years.clone(), vec![0, 0, 1], vec![0], 2000)
                .unwrap_err(),
            GraphError::DatasetCites("b".into())
        );
        assert!(
            CitationGraph::from_csr(["a", "b"], kinds.clone(), years.clone(), vec![0, 1, 1], vec![0], 2000).is_err()
        );
        let g = CitationGraph::from_csr(["a", "b"], kinds, years, vec![0, 1, 1], vec![1], 2000).unwrap();
        assert_eq!(g.cited_by(1), &[0]);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("Dataset".parse::<NodeKind>(), Ok(NodeKind::Dataset));
        assert_eq!(" publication ".parse::<NodeKind>(), Ok(NodeKind::Publication));
        assert!("software".parse::<NodeKind>().is_err());
    }
}
