//! Signed adjacency representation and edge-list serialization.
//!
//! A [`SignedGraph`] stores an n x n matrix with entries in {+1, -1, 0}.
//! Small graphs use a dense byte matrix; larger ones a compressed
//! row-sorted sparse layout. Both sit behind the same accessors, so callers
//! never branch on the storage kind.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Graphs up to this node count use the dense byte matrix.
const DENSE_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Adjacency {
    Dense {
        n: usize,
        cells: Vec<i8>,
    },
    /// CSR-style: `row_ptr[i]..row_ptr[i+1]` indexes the column/sign arrays,
    /// columns sorted ascending within each row.
    Sparse {
        row_ptr: Vec<usize>,
        cols: Vec<u32>,
        signs: Vec<i8>,
    },
}

/// Adjacency of a signed network with entries in {+1, -1, 0}.
///
/// Invariants enforced at construction: entries are in {+1, -1, 0}, the
/// diagonal is identically zero, and undirected graphs are symmetric.
/// Instances are immutable after construction and safe to share across
/// threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedGraph {
    adj: Adjacency,
    node_labels: Option<Vec<String>>,
    directed: bool,
}

impl SignedGraph {
    /// Builds a graph from `(src, dst, sign)` triples. When `directed` is
    /// false each edge is mirrored. Self-loops, out-of-range endpoints,
    /// invalid signs, and pairs listed with both signs are rejected.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, i8)>,
        directed: bool,
    ) -> Result<Self> {
        let mut ordered: Vec<(u32, u32, i8)> = Vec::new();
        for (src, dst, sign) in edges {
            if src >= n || dst >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({src}, {dst}) out of range for n = {n}"
                )));
            }
            if src == dst {
                return Err(Error::InvalidInput(format!("self-loop on node {src}")));
            }
            if sign != 1 && sign != -1 {
                return Err(Error::InvalidInput(format!(
                    "edge sign must be +1 or -1, got {sign}"
                )));
            }
            ordered.push((src as u32, dst as u32, sign));
            if !directed {
                ordered.push((dst as u32, src as u32, sign));
            }
        }
        ordered.sort_unstable();
        // Duplicates with equal signs collapse; opposite signs are an error.
        let mut dedup: Vec<(u32, u32, i8)> = Vec::with_capacity(ordered.len());
        for (i, j, s) in ordered {
            match dedup.last() {
                Some(&(pi, pj, ps)) if pi == i && pj == j => {
                    if ps != s {
                        return Err(Error::ConflictingSign {
                            a: i.to_string(),
                            b: j.to_string(),
                        });
                    }
                }
                _ => dedup.push((i, j, s)),
            }
        }

        let adj = if n <= DENSE_LIMIT {
            let mut cells = vec![0i8; n * n];
            for &(i, j, s) in &dedup {
                cells[i as usize * n + j as usize] = s;
            }
            Adjacency::Dense { n, cells }
        } else {
            let mut row_ptr = vec![0usize; n + 1];
            for &(i, _, _) in &dedup {
                row_ptr[i as usize + 1] += 1;
            }
            for i in 0..n {
                row_ptr[i + 1] += row_ptr[i];
            }
            let mut cols = vec![0u32; dedup.len()];
            let mut signs = vec![0i8; dedup.len()];
            let mut cursor = row_ptr.clone();
            for &(i, j, s) in &dedup {
                let at = cursor[i as usize];
                cols[at] = j;
                signs[at] = s;
                cursor[i as usize] += 1;
            }
            Adjacency::Sparse {
                row_ptr,
                cols,
                signs,
            }
        };

        Ok(SignedGraph {
            adj,
            node_labels: None,
            directed,
        })
    }

    /// Attaches external node IDs; the list length must equal `n`.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::LengthMismatch {
                left: labels.len(),
                right: self.n(),
            });
        }
        self.node_labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        match &self.adj {
            Adjacency::Dense { n, .. } => *n,
            Adjacency::Sparse { row_ptr, .. } => row_ptr.len() - 1,
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Entry (i, j): +1, -1, or 0.
    pub fn entry(&self, i: usize, j: usize) -> i8 {
        match &self.adj {
            Adjacency::Dense { n, cells } => cells[i * n + j],
            Adjacency::Sparse {
                row_ptr,
                cols,
                signs,
            } => {
                let row = &cols[row_ptr[i]..row_ptr[i + 1]];
                match row.binary_search(&(j as u32)) {
                    Ok(pos) => signs[row_ptr[i] + pos],
                    Err(_) => 0,
                }
            }
        }
    }

    /// Nonzero entries of row i as `(j, sign)`, columns ascending.
    pub fn row(&self, i: usize) -> Box<dyn Iterator<Item = (usize, i8)> + '_> {
        match &self.adj {
            Adjacency::Dense { n, cells } => Box::new(
                cells[i * n..(i + 1) * n]
                    .iter()
                    .enumerate()
                    .filter(|&(_, &s)| s != 0)
                    .map(|(j, &s)| (j, s)),
            ),
            Adjacency::Sparse {
                row_ptr,
                cols,
                signs,
            } => Box::new(
                cols[row_ptr[i]..row_ptr[i + 1]]
                    .iter()
                    .zip(&signs[row_ptr[i]..row_ptr[i + 1]])
                    .map(|(&j, &s)| (j as usize, s)),
            ),
        }
    }

    /// Canonical nonzero entries: the upper triangle (i < j) for undirected
    /// graphs, every ordered pair for directed ones.
    pub fn edges(&self) -> Vec<(usize, usize, i8)> {
        let mut out = Vec::new();
        for i in 0..self.n() {
            for (j, s) in self.row(i) {
                if self.directed || i < j {
                    out.push((i, j, s));
                }
            }
        }
        out
    }

    /// Number of canonical nonzero entries (unordered pairs when undirected).
    pub fn edge_count(&self) -> usize {
        let nnz: usize = match &self.adj {
            Adjacency::Dense { cells, .. } => cells.iter().filter(|&&s| s != 0).count(),
            Adjacency::Sparse { signs, .. } => signs.len(),
        };
        if self.directed {
            nnz
        } else {
            nnz / 2
        }
    }

    /// Counts of (positive, negative) canonical edges.
    pub fn sign_counts(&self) -> (usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        for &(_, _, s) in &self.edges() {
            if s > 0 {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        (pos, neg)
    }

    pub fn node_labels(&self) -> Option<&[String]> {
        self.node_labels.as_deref()
    }

    /// External ID of node i: the stored label, or the index rendered in
    /// decimal when no labels are attached.
    pub fn label_of(&self, i: usize) -> String {
        match &self.node_labels {
            Some(labels) => labels[i].clone(),
            None => i.to_string(),
        }
    }

    /// True when entry (i, j) equals entry (j, i) for every pair.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n()).all(|i| self.row(i).all(|(j, s)| self.entry(j, i) == s))
    }
}

/// Hard assignment of nodes to blocks with compacted labels: every index is
/// below `k` and every value in `[0, k)` occurs at least once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Compacts arbitrary labels into `[0, k)`, relabeling by ascending
    /// original value.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut distinct: Vec<usize> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let rank: HashMap<usize, usize> =
            distinct.iter().enumerate().map(|(r, &v)| (v, r)).collect();
        Partition {
            assignment: labels.iter().map(|v| rank[v]).collect(),
            k: distinct.len(),
        }
    }

    /// Accepts an already-compact assignment, validating the invariants.
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self> {
        let mut seen = vec![false; k];
        for &b in &assignment {
            if b >= k {
                return Err(Error::InvalidInput(format!(
                    "block index {b} out of range for k = {k}"
                )));
            }
            seen[b] = true;
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidInput(
                "partition labels are not compact".into(),
            ));
        }
        Ok(Partition { assignment, k })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &b in &self.assignment {
            sizes[b] += 1;
        }
        sizes
    }
}

/// Per-file counters reported by [`load_edge_list_with_stats`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub self_loops_dropped: usize,
    pub duplicate_lines: usize,
}

/// Reads a whitespace-separated `src dst sign` edge list.
///
/// `#`-prefixed lines are comments, except for a `# nodes: a b c` directive
/// (written by [`write_edge_list`]) that pins the node order so files
/// round-trip exactly, including isolated nodes. Without a directive, node
/// IDs map to dense indices in first-appearance order. Signs must be
/// literally `1` or `-1`. Self-loop lines are dropped and counted. When
/// `directed` is false each listed edge is mirrored. `n_hint` pads the node
/// count with trailing isolated nodes.
pub fn load_edge_list(
    path: impl AsRef<Path>,
    n_hint: Option<usize>,
    directed: bool,
) -> Result<SignedGraph> {
    load_edge_list_with_stats(path, n_hint, directed).map(|(g, _)| g)
}

/// [`load_edge_list`] variant that also returns dropped-line counters.
pub fn load_edge_list_with_stats(
    path: impl AsRef<Path>,
    n_hint: Option<usize>,
    directed: bool,
) -> Result<(SignedGraph, LoadStats)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;

    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let intern = |token: &str, labels: &mut Vec<String>, index: &mut HashMap<String, usize>| {
        if let Some(&i) = index.get(token) {
            i
        } else {
            let i = labels.len();
            labels.push(token.to_string());
            index.insert(token.to_string(), i);
            i
        }
    };

    let mut edges: Vec<(usize, usize, i8)> = Vec::new();
    let mut stats = LoadStats::default();
    let mut saw_directive = false;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(rest) = comment.trim_start().strip_prefix("nodes:") {
                saw_directive = true;
                for token in rest.split_whitespace() {
                    intern(token, &mut labels, &mut index);
                }
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::MalformedLine {
                path: path.to_path_buf(),
                line: lineno,
                reason: format!("expected 'src dst sign', found {} fields", fields.len()),
            });
        }
        let sign = match fields[2] {
            "1" => 1i8,
            "-1" => -1i8,
            other => {
                return Err(Error::MalformedLine {
                    path: path.to_path_buf(),
                    line: lineno,
                    reason: format!("sign must be '1' or '-1', found '{other}'"),
                })
            }
        };
        if fields[0] == fields[1] {
            stats.self_loops_dropped += 1;
            continue;
        }
        let src = intern(fields[0], &mut labels, &mut index);
        let dst = intern(fields[1], &mut labels, &mut index);
        edges.push((src, dst, sign));
    }

    if edges.is_empty() && !saw_directive {
        return Err(Error::EmptyInput {
            path: path.to_path_buf(),
        });
    }

    let observed = labels.len();
    let n = match n_hint {
        Some(hint) if hint < observed => {
            return Err(Error::InvalidInput(format!(
                "n_hint = {hint} but the file references {observed} distinct nodes"
            )));
        }
        Some(hint) => hint,
        None => observed,
    };
    for i in observed..n {
        labels.push(i.to_string());
    }

    // Track exact duplicates so they do not trip the conflict check twice.
    let mut seen: HashMap<(usize, usize), i8> = HashMap::new();
    let mut unique: Vec<(usize, usize, i8)> = Vec::with_capacity(edges.len());
    for (src, dst, sign) in edges {
        let key = if directed || src <= dst {
            (src, dst)
        } else {
            (dst, src)
        };
        match seen.get(&key) {
            Some(&prev) if prev == sign => stats.duplicate_lines += 1,
            Some(_) => {
                return Err(Error::ConflictingSign {
                    a: labels[src].clone(),
                    b: labels[dst].clone(),
                });
            }
            None => {
                seen.insert(key, sign);
                unique.push((src, dst, sign));
            }
        }
    }

    let graph = SignedGraph::from_edges(n, unique, directed)?.with_labels(labels)?;
    Ok((graph, stats))
}

/// Writes a graph as an edge-list file that [`load_edge_list`] reads back
/// bit-exactly: a `# nodes:` directive pinning the node order, then one
/// `src dst sign` line per canonical nonzero entry.
pub fn write_edge_list(graph: &SignedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    out.push_str("# signed edge list: src dst sign\n");
    let _ = writeln!(out, "# directed: {}", graph.is_directed());
    out.push_str("# nodes:");
    for i in 0..graph.n() {
        out.push(' ');
        out.push_str(&graph.label_of(i));
    }
    out.push('\n');
    for (i, j, s) in graph.edges() {
        let _ = writeln!(out, "{} {} {}", graph.label_of(i), graph.label_of(j), s);
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Writes a partition as `node block` lines, one per node in index order.
pub fn write_partition(
    partition: &Partition,
    labels: Option<&[String]>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    out.push_str("# partition: node block\n");
    for (i, &b) in partition.assignment().iter().enumerate() {
        let label = match labels {
            Some(ls) => ls[i].clone(),
            None => i.to_string(),
        };
        let _ = writeln!(out, "{label} {b}");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Reads `node block` lines back as `(label, block)` pairs in file order.
pub fn load_partition_pairs(path: impl AsRef<Path>) -> Result<Vec<(String, usize)>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::MalformedLine {
                path: path.to_path_buf(),
                line: lineno + 1,
                reason: format!("expected 'node block', found {} fields", fields.len()),
            });
        }
        let block: usize = fields[1].parse().map_err(|_| Error::MalformedLine {
            path: path.to_path_buf(),
            line: lineno + 1,
            reason: format!("block must be a non-negative integer, found '{}'", fields[1]),
        })?;
        pairs.push((fields[0].to_string(), block));
    }
    if pairs.is_empty() {
        return Err(Error::EmptyInput {
            path: path.to_path_buf(),
        });
    }
    Ok(pairs)
}
