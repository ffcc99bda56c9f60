//! Sparsity patterns, their undirected dual graphs and node maps between
//! consecutive graphs.
//!
//! A [`SparsityPattern`] is the row-compressed nonzero structure of a square
//! matrix. Its dual [`SymGraph`] has one node per row and one undirected edge
//! per off-diagonal nonzero pair. Adjacency lists are always sorted and free of
//! duplicates and self-loops, so differences between graphs reduce to linear
//! merges.

use crate::error::{Error, Result};

/// Undirected edge stored as `(min, max)`.
pub type Edge = (usize, usize);

#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Row-compressed nonzero pattern of a square matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    n_rows: usize,
    row_starts: Vec<usize>,
    col_indices: Vec<usize>,
}

impl SparsityPattern {
    /// Wraps raw compressed arrays after checking offsets, bounds and
    /// strict ordering within each row. Symmetry is not checked here.
    pub fn new(n_rows: usize, row_starts: Vec<usize>, col_indices: Vec<usize>) -> Result<Self> {
        if row_starts.len() != n_rows + 1 {
            return Err(Error::MalformedPattern(format!(
                "row_starts has length {}, expected {}",
                row_starts.len(),
                n_rows + 1
            )));
        }
        if row_starts[0] != 0 || row_starts[n_rows] != col_indices.len() {
            return Err(Error::MalformedPattern(
                "row_starts must begin at 0 and end at nnz".into(),
            ));
        }
        for r in 0..n_rows {
            let (s, e) = (row_starts[r], row_starts[r + 1]);
            if s > e {
                return Err(Error::MalformedPattern(format!("row {r} has negative length")));
            }
            let row = &col_indices[s..e];
            for (k, &c) in row.iter().enumerate() {
                if c >= n_rows {
                    return Err(Error::IndexOutOfBounds {
                        index: c,
                        bound: n_rows,
                    });
                }
                if k > 0 && row[k - 1] >= c {
                    return Err(Error::MalformedPattern(format!(
                        "row {r} is not strictly increasing"
                    )));
                }
            }
        }
        Ok(SparsityPattern {
            n_rows,
            row_starts,
            col_indices,
        })
    }

    /// Builds a pattern from arbitrary `(row, col)` entries; duplicates are merged.
    pub fn from_entries(n_rows: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n_rows];
        for (r, c) in entries {
            let bad = r.max(c);
            if bad >= n_rows {
                return Err(Error::IndexOutOfBounds {
                    index: bad,
                    bound: n_rows,
                });
            }
            rows[r].push(c);
        }
        Ok(Self::from_rows(rows))
    }

    /// Symmetric pattern with the given off-diagonal pairs plus a full diagonal.
    pub fn symmetric_with_diagonal(n_rows: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut entries: Vec<(usize, usize)> = (0..n_rows).map(|i| (i, i)).collect();
        for (u, v) in edges {
            entries.push((u, v));
            entries.push((v, u));
        }
        Self::from_entries(n_rows, entries)
    }

    fn from_rows(mut rows: Vec<Vec<usize>>) -> Self {
        let n_rows = rows.len();
        let mut row_starts = Vec::with_capacity(n_rows + 1);
        let mut col_indices = Vec::new();
        row_starts.push(0);
        for row in rows.iter_mut() {
            row.sort_unstable();
            row.dedup();
            col_indices.extend_from_slice(row);
            row_starts.push(col_indices.len());
        }
        SparsityPattern {
            n_rows,
            row_starts,
            col_indices,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn nnz(&self) -> usize {
        self.col_indices.len()
    }

    pub fn row_starts(&self) -> &[usize] {
        &self.row_starts
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.col_indices[self.row_starts[r]..self.row_starts[r + 1]]
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        self.row(r).binary_search(&c).is_ok()
    }

    /// Position of `(r, c)` in the column index array.
    pub fn position(&self, r: usize, c: usize) -> Option<usize> {
        self.row(r)
            .binary_search(&c)
            .ok()
            .map(|k| self.row_starts[r] + k)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_rows).flat_map(move |r| self.row(r).iter().map(move |&c| (r, c)))
    }

    /// Checks that `(i, j)` is present whenever `(j, i)` is.
    pub fn check_symmetric(&self) -> Result<()> {
        // Transpose counts must match row lengths; then every entry must have a mirror.
        for (r, c) in self.entries() {
            if !self.contains(c, r) {
                return Err(Error::AsymmetricPattern { row: r, col: c });
            }
        }
        Ok(())
    }

    /// Pattern of `P A P^T` where `perm[new] = old`.
    pub fn permuted(&self, perm: &crate::ordering::Permutation) -> Result<Self> {
        if perm.len() != self.n_rows {
            return Err(Error::InvalidPermutation(format!(
                "length {} does not match {} rows",
                perm.len(),
                self.n_rows
            )));
        }
        let inv = perm.inverse();
        let rows = (0..self.n_rows)
            .map(|new_r| {
                self.row(perm.as_slice()[new_r])
                    .iter()
                    .map(|&c| inv[c])
                    .collect()
            })
            .collect();
        Ok(Self::from_rows(rows))
    }
}

/// Undirected graph in compressed adjacency form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymGraph {
    adj_starts: Vec<usize>,
    adj: Vec<usize>,
}

impl SymGraph {
    pub fn empty(n: usize) -> Self {
        SymGraph {
            adj_starts: vec![0; n + 1],
            adj: Vec::new(),
        }
    }

    /// Builds a graph from an edge list; self-loops are dropped and
    /// duplicates merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut lists = vec![Vec::new(); n];
        for (u, v) in edges {
            let bad = u.max(v);
            if bad >= n {
                return Err(Error::IndexOutOfBounds { index: bad, bound: n });
            }
            if u != v {
                lists[u].push(v);
                lists[v].push(u);
            }
        }
        Ok(Self::from_lists(lists))
    }

    /// `lists` must already be symmetric.
    pub(crate) fn from_lists(mut lists: Vec<Vec<usize>>) -> Self {
        let mut adj_starts = Vec::with_capacity(lists.len() + 1);
        let mut adj = Vec::new();
        adj_starts.push(0);
        for (i, l) in lists.iter_mut().enumerate() {
            l.sort_unstable();
            l.dedup();
            adj.extend(l.iter().copied().filter(|&j| j != i));
            adj_starts.push(adj.len());
        }
        SymGraph { adj_starts, adj }
    }

    pub fn n_nodes(&self) -> usize {
        self.adj_starts.len() - 1
    }

    pub fn n_edges(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[self.adj_starts[u]..self.adj_starts[u + 1]]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj_starts[u + 1] - self.adj_starts[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(min, max)`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n_nodes()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    /// Off-diagonal pattern of the graph, optionally with a full diagonal.
    pub fn to_pattern(&self, with_diagonal: bool) -> SparsityPattern {
        let n = self.n_nodes();
        let rows = (0..n)
            .map(|u| {
                let mut r = self.neighbors(u).to_vec();
                if with_diagonal {
                    r.push(u);
                }
                r
            })
            .collect();
        SparsityPattern::from_rows(rows)
    }
}

/// Maps every node of the new graph to its index in the previous graph, or
/// `None` for nodes that did not exist before.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeMap {
    entries: Vec<Option<usize>>,
    n_old: usize,
}

impl NodeMap {
    pub fn new(entries: Vec<Option<usize>>, n_old: usize) -> Result<Self> {
        let mut seen = vec![false; n_old];
        for (new, e) in entries.iter().enumerate() {
            if let Some(old) = *e {
                if old >= n_old {
                    return Err(Error::InvalidMap(format!(
                        "node {new} maps to {old}, previous graph has {n_old} nodes"
                    )));
                }
                if std::mem::replace(&mut seen[old], true) {
                    return Err(Error::InvalidMap(format!(
                        "previous node {old} is mapped more than once"
                    )));
                }
            }
        }
        Ok(NodeMap { entries, n_old })
    }

    pub fn identity(n: usize) -> Self {
        NodeMap {
            entries: (0..n).map(Some).collect(),
            n_old: n,
        }
    }

    pub fn n_new(&self) -> usize {
        self.entries.len()
    }

    pub fn n_old(&self) -> usize {
        self.n_old
    }

    pub fn entries(&self) -> &[Option<usize>] {
        &self.entries
    }

    pub fn get(&self, new: usize) -> Option<usize> {
        self.entries[new]
    }

    pub fn is_identity(&self) -> bool {
        self.n_old == self.entries.len()
            && self.entries.iter().enumerate().all(|(i, e)| *e == Some(i))
    }

    /// Inverse direction: previous index to new index, `None` for removed nodes.
    pub fn old_to_new(&self) -> Vec<Option<usize>> {
        let mut inv = vec![None; self.n_old];
        for (new, e) in self.entries.iter().enumerate() {
            if let Some(old) = *e {
                inv[old] = Some(new);
            }
        }
        inv
    }

    pub fn added(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_none())
            .map(|(i, _)| i)
    }

    pub fn check_sizes(&self, n_old: usize, n_new: usize) -> Result<()> {
        if self.n_old != n_old || self.entries.len() != n_new {
            return Err(Error::InvalidMap(format!(
                "map covers {} -> {} nodes, graphs have {} -> {}",
                self.n_old,
                self.entries.len(),
                n_old,
                n_new
            )));
        }
        Ok(())
    }
}

/// Builds the dual graph of a structurally symmetric pattern. Diagonal
/// entries are dropped.
pub fn build_dual(pattern: &SparsityPattern) -> Result<SymGraph> {
    compress_by_dim(pattern, 1)
}

/// Merges each run of `dim` consecutive rows into one node. Two blocks are
/// adjacent when any nonzero couples them.
pub fn compress_by_dim(pattern: &SparsityPattern, dim: usize) -> Result<SymGraph> {
    let n = pattern.n_rows();
    if dim == 0 || !n.is_multiple_of(dim) {
        return Err(Error::DimMismatch { n, dim });
    }
    pattern.check_symmetric()?;
    let blocks = n / dim;
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); blocks];
    for r in 0..n {
        let b = r / dim;
        for &c in pattern.row(r) {
            let cb = c / dim;
            if cb != b {
                lists[b].push(cb);
            }
        }
    }
    Ok(SymGraph::from_lists(lists))
}

/// Added and removed edges between two consecutive graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeDelta {
    /// New-graph indexing.
    pub added: Vec<Edge>,
    /// Previous-graph indexing.
    pub removed: Vec<Edge>,
}

impl EdgeDelta {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty()
    }
}

/// Edge-level difference of `g_new` against `g_old` under `map`.
///
/// Every edge touching an added node counts as added; edges of removed nodes
/// are ignored.
pub fn edge_set_diff(g_old: &SymGraph, g_new: &SymGraph, map: &NodeMap) -> Result<EdgeDelta> {
    map.check_sizes(g_old.n_nodes(), g_new.n_nodes())?;
    let old_to_new = map.old_to_new();
    let mut delta = EdgeDelta::default();
    let mut mapped: Vec<usize> = Vec::new();
    for u in 0..g_new.n_nodes() {
        let new_nbrs = g_new.neighbors(u);
        let Some(ou) = map.get(u) else {
            delta
                .added
                .extend(new_nbrs.iter().filter(|&&v| v > u || map.get(v).is_some()).map(|&v| edge(u, v)));
            continue;
        };
        mapped.clear();
        mapped.extend(g_old.neighbors(ou).iter().filter_map(|&ov| old_to_new[ov]));
        mapped.sort_unstable();
        // merge: sorted new neighbours vs sorted surviving old neighbours
        let (mut i, mut j) = (0, 0);
        while i < new_nbrs.len() || j < mapped.len() {
            let a = new_nbrs.get(i).copied();
            let b = mapped.get(j).copied();
            match (a, b) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(x), y) if y.is_none_or(|y| x < y) => {
                    // edges to added nodes are emitted from the added side
                    if x > u && map.get(x).is_some() {
                        delta.added.push((u, x));
                    }
                    i += 1;
                }
                (_, Some(y)) => {
                    if y > u {
                        let ov = map.get(y).expect("mapped neighbour survives");
                        delta.removed.push(edge(ou, ov));
                    }
                    j += 1;
                }
                _ => unreachable!(),
            }
        }
    }
    delta.added.sort_unstable();
    delta.added.dedup();
    delta.removed.sort_unstable();
    Ok(delta)
}

/// Sub-graph on `nodes` (local index = position in the slice) with the map
/// back to global indices.
pub fn induced_subgraph(g: &SymGraph, nodes: &[usize]) -> Result<(SymGraph, Vec<usize>)> {
    let n = g.n_nodes();
    let mut local = vec![usize::MAX; n];
    for (k, &u) in nodes.iter().enumerate() {
        if u >= n {
            return Err(Error::IndexOutOfBounds { index: u, bound: n });
        }
        local[u] = k;
    }
    Ok((induced_with_scratch(g, nodes, &local), nodes.to_vec()))
}

/// `local[u]` must hold the position of `u` in `nodes`, `usize::MAX` elsewhere.
pub(crate) fn induced_with_scratch(g: &SymGraph, nodes: &[usize], local: &[usize]) -> SymGraph {
    let mut adj_starts = Vec::with_capacity(nodes.len() + 1);
    let mut adj = Vec::new();
    adj_starts.push(0);
    let mut row = Vec::new();
    for &u in nodes {
        row.clear();
        row.extend(
            g.neighbors(u)
                .iter()
                .map(|&v| local[v])
                .filter(|&l| l != usize::MAX),
        );
        row.sort_unstable();
        adj.extend_from_slice(&row);
        adj_starts.push(adj.len());
    }
    SymGraph { adj_starts, adj }
}
