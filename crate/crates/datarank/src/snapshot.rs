//! Binary snapshot of a finalized graph.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic        8 bytes  "DRGRAPH\0"
//! version      u32      1
//! ref_year     i32
//! n_nodes      u64
//! n_edges      u64
//! kinds        u8  x n_nodes      0 = publication, 1 = dataset
//! years        i32 x n_nodes
//! offsets      u64 x (n_nodes+1)  forward CSR
//! targets      u32 x n_edges      cited node per edge
//! ids          n_nodes x (u32 byte length, UTF-8 bytes)
//! ```
//!
//! The fingerprint is the SHA-256 of the whole file.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use datarank_core::{CitationGraph, GraphError, NodeKind};
use sha2::{Digest, Sha256};

pub const MAGIC: &[u8; 8] = b"DRGRAPH\0";
pub const VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error("not a graph snapshot (bad magic)")]
    BadMagic,
    #[error("unsupported snapshot version {0}")]
    UnsupportedVersion(u32),
    #[error("snapshot is truncated or has trailing bytes")]
    Truncated,
    #[error("snapshot field out of range: {0}")]
    OutOfRange(&'static str),
    #[error("node id is not valid UTF-8")]
    InvalidUtf8,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(io::Error),
}

impl From<io::Error> for SnapshotError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            SnapshotError::Truncated
        } else {
            SnapshotError::Io(e)
        }
    }
}

struct Hashing<T> {
    inner: T,
    hasher: Sha256,
}

impl<W: Write> Write for Hashing<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

impl<R: Read> Read for Hashing<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }
}

impl<T> Hashing<T> {
    fn new(inner: T) -> Self {
        Self {
            inner,
            hasher: Sha256::new(),
        }
    }

    fn hex(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

/// Writes `graph` and returns its fingerprint.
pub fn write_snapshot<W: Write>(graph: &CitationGraph, out: W) -> Result<String, SnapshotError> {
    let mut w = Hashing::new(BufWriter::with_capacity(1 << 20, out));
    let n = graph.n_nodes();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&graph.reference_year().to_le_bytes())?;
    w.write_all(&(n as u64).to_le_bytes())?;
    w.write_all(&(graph.n_edges() as u64).to_le_bytes())?;
    for &k in graph.kinds() {
        w.write_all(&[k as u8])?;
    }
    for &y in graph.years() {
        w.write_all(&y.to_le_bytes())?;
    }
    let (offsets, targets) = graph.forward_csr();
    for &o in offsets {
        w.write_all(&(o as u64).to_le_bytes())?;
    }
    for &t in targets {
        w.write_all(&t.to_le_bytes())?;
    }
    for id in graph.external_ids() {
        let len = u32::try_from(id.len()).map_err(|_| SnapshotError::OutOfRange("id length"))?;
        w.write_all(&len.to_le_bytes())?;
        w.write_all(id.as_bytes())?;
    }
    w.flush()?;
    Ok(w.hex())
}

pub fn save_snapshot(graph: &CitationGraph, path: &Path) -> Result<String, SnapshotError> {
    write_snapshot(graph, File::create(path)?)
}

fn read_array<R: Read, T, const B: usize>(
    r: &mut R,
    n: usize,
    conv: impl Fn([u8; B]) -> T,
) -> Result<Vec<T>, SnapshotError> {
    // Capacity is bounded so a corrupt header cannot request a huge
    // allocation before any data has been read.
    let mut out = Vec::with_capacity(n.min(1 << 24));
    let mut buf = vec![0u8; B * 8192];
    let mut left = n;
    while left > 0 {
        let take = left.min(8192);
        let bytes = &mut buf[..take * B];
        r.read_exact(bytes)?;
        out.extend(bytes.chunks_exact(B).map(|c| conv(c.try_into().unwrap())));
        left -= take;
    }
    Ok(out)
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, SnapshotError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64, SnapshotError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// Reads a snapshot, validating every graph invariant, and returns it with
/// its fingerprint.
pub fn read_snapshot<R: Read>(input: R) -> Result<(CitationGraph, String), SnapshotError> {
    let mut r = Hashing::new(BufReader::with_capacity(1 << 20, input));
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(|_| SnapshotError::BadMagic)?;
    if &magic != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(SnapshotError::UnsupportedVersion(version));
    }
    let reference_year = read_u32(&mut r)? as i32;
    let n = usize::try_from(read_u64(&mut r)?).map_err(|_| SnapshotError::OutOfRange("n_nodes"))?;
    let e = usize::try_from(read_u64(&mut r)?).map_err(|_| SnapshotError::OutOfRange("n_edges"))?;
    if n > u32::MAX as usize {
        return Err(SnapshotError::OutOfRange("n_nodes"));
    }
    let kinds = read_array(&mut r, n, |[b]: [u8; 1]| NodeKind::from_u8(b))?
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(SnapshotError::OutOfRange("node kind"))?;
    let years = read_array(&mut r, n, i32::from_le_bytes)?;
    let offsets = read_array(&mut r, n + 1, u64::from_le_bytes)?
        .into_iter()
        .map(|o| usize::try_from(o).map_err(|_| SnapshotError::OutOfRange("offset")))
        .collect::<Result<Vec<_>, _>>()?;
    let targets = read_array(&mut r, e, u32::from_le_bytes)?;
    let mut arena = String::new();
    let mut ends = Vec::with_capacity(n.min(1 << 24));
    let mut bytes = Vec::new();
    for _ in 0..n {
        let len = read_u32(&mut r)? as usize;
        bytes.resize(len, 0);
        r.read_exact(&mut bytes)?;
        arena.push_str(std::str::from_utf8(&bytes).map_err(|_| SnapshotError::InvalidUtf8)?);
        ends.push(arena.len());
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(SnapshotError::Truncated);
    }
    let starts = std::iter::once(0).chain(ends.iter().copied());
    let ids = starts.zip(&ends).map(|(a, &b)| &arena[a..b]);
    let graph = CitationGraph::from_csr(ids, kinds, years, offsets, targets, reference_year)?;
    Ok((graph, r.hex()))
}

pub fn load_snapshot(path: &Path) -> Result<(CitationGraph, String), SnapshotError> {
    read_snapshot(File::open(path)?)
}
