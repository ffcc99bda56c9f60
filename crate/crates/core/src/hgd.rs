//! Hierarchical graph decomposition: a complete binary tree, stored as an
//! array, whose internal nodes hold vertex separators and whose leaves hold
//! the remaining sub-graphs.
//!
//! Children of tree index `i` live at `2i + 1` and `2i + 2`. Every graph node
//! belongs to exactly one tree node, and the node set of an internal tree
//! node separates the nodes stored in its left subtree from those in its
//! right subtree.

use crate::error::{Error, Result};
use crate::graph::{induced_with_scratch, SymGraph};
use crate::ordering::Permutation;
use crate::separator::{compute_min_separator, SeparatorEngine};

/// Sub-graphs smaller than this are not split further.
pub const DEFAULT_MIN_SPLIT: usize = 8;

/// Default number of graph nodes per leaf when the depth is chosen automatically.
pub const DEFAULT_TARGET_LEAF: usize = 256;

pub const MAX_LEVEL_CAP: usize = 16;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HgdNode {
    /// Global graph nodes, in the order the local permutation refers to.
    pub nodes: Vec<usize>,
    /// First position of this node's block in the graph permutation.
    pub offset: usize,
    /// Ordering of `nodes`, kept across calls for reuse.
    pub local_perm: Option<Permutation>,
}

#[inline]
pub fn tree_size(max_level: usize) -> usize {
    (1usize << (max_level + 1)) - 1
}

#[inline]
pub fn level_of(i: usize) -> usize {
    (usize::BITS - 1 - (i + 1).leading_zeros()) as usize
}

#[inline]
pub fn parent_of(i: usize) -> Option<usize> {
    (i > 0).then(|| (i - 1) / 2)
}

/// True when `a` is `b` or one of its ancestors.
pub fn is_ancestor_or_self(a: usize, mut b: usize) -> bool {
    let la = level_of(a);
    while level_of(b) > la {
        b = (b - 1) / 2;
    }
    a == b
}

/// Lowest common ancestor of two tree indices.
pub fn lca(mut a: usize, mut b: usize) -> usize {
    while level_of(a) > level_of(b) {
        a = (a - 1) / 2;
    }
    while level_of(b) > level_of(a) {
        b = (b - 1) / 2;
    }
    while a != b {
        a = (a - 1) / 2;
        b = (b - 1) / 2;
    }
    a
}

/// `max(0, floor(log2(n_nodes / target_leaf)))`, capped at [`MAX_LEVEL_CAP`].
pub fn default_max_level(n_nodes: usize, target_leaf: usize) -> usize {
    let ratio = n_nodes / target_leaf.max(1);
    if ratio == 0 {
        0
    } else {
        (ratio.ilog2() as usize).min(MAX_LEVEL_CAP)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HgdTree {
    max_level: usize,
    nodes: Vec<HgdNode>,
    /// Tree index holding each graph node.
    owner: Vec<usize>,
}

/// Decomposition parameters shared by build and partial rebuilds.
#[derive(Clone, Copy)]
pub struct Decomposer<'e> {
    pub engine: &'e dyn SeparatorEngine,
    pub seed: u64,
    pub min_split: usize,
}

impl<'e> Decomposer<'e> {
    pub fn new(engine: &'e dyn SeparatorEngine, seed: u64) -> Self {
        Decomposer {
            engine,
            seed,
            min_split: DEFAULT_MIN_SPLIT,
        }
    }

    pub fn with_min_split(mut self, min_split: usize) -> Self {
        self.min_split = min_split;
        self
    }
}

/// Builds the decomposition of `g` with `max_level` levels below the root.
pub fn hgd_build(g: &SymGraph, max_level: usize, engine: &dyn SeparatorEngine, seed: u64) -> HgdTree {
    HgdTree::build(g, max_level, Decomposer::new(engine, seed))
}

impl HgdTree {
    pub fn build(g: &SymGraph, max_level: usize, dec: Decomposer<'_>) -> Self {
        let n = g.n_nodes();
        let mut tree = HgdTree {
            max_level,
            nodes: vec![HgdNode::default(); tree_size(max_level)],
            owner: vec![0; n],
        };
        let mut scratch = vec![usize::MAX; n];
        tree.decompose(g, 0, (0..n).collect(), dec, &mut scratch);
        tree
    }

    /// Tree with explicitly given node sets, for tests and worked examples.
    pub fn from_node_sets(max_level: usize, sets: Vec<Vec<usize>>, n_nodes: usize) -> Result<Self> {
        if sets.len() != tree_size(max_level) {
            return Err(Error::StaleTree(format!(
                "{} node sets for a tree of size {}",
                sets.len(),
                tree_size(max_level)
            )));
        }
        let tree = HgdTree {
            max_level,
            nodes: sets
                .into_iter()
                .map(|nodes| HgdNode {
                    nodes,
                    ..Default::default()
                })
                .collect(),
            owner: vec![usize::MAX; n_nodes],
        };
        let mut tree = tree;
        tree.check_partition(n_nodes).map_err(Error::StaleTree)?;
        tree.rebuild_owner(n_nodes);
        Ok(tree)
    }

    fn decompose(
        &mut self,
        g: &SymGraph,
        idx: usize,
        mut nodes: Vec<usize>,
        dec: Decomposer<'_>,
        scratch: &mut [usize],
    ) {
        let level = level_of(idx);
        if level == self.max_level || nodes.len() < dec.min_split {
            nodes.sort_unstable();
            for &u in &nodes {
                self.owner[u] = idx;
            }
            self.nodes[idx].nodes = nodes;
            return;
        }
        nodes.sort_unstable();
        for (k, &u) in nodes.iter().enumerate() {
            scratch[u] = k;
        }
        let sub = induced_with_scratch(g, &nodes, scratch);
        for &u in &nodes {
            scratch[u] = usize::MAX;
        }
        let split = compute_min_separator(&sub, dec.engine, dec.seed);
        let to_global = |set: Vec<usize>| -> Vec<usize> { set.into_iter().map(|l| nodes[l]).collect() };
        let sep = to_global(split.sep);
        let left = to_global(split.left);
        let right = to_global(split.right);
        for &u in &sep {
            self.owner[u] = idx;
        }
        self.nodes[idx].nodes = sep;
        self.decompose(g, 2 * idx + 1, left, dec, scratch);
        self.decompose(g, 2 * idx + 2, right, dec, scratch);
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[HgdNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &HgdNode {
        &self.nodes[i]
    }

    pub(crate) fn node_mut(&mut self, i: usize) -> &mut HgdNode {
        &mut self.nodes[i]
    }

    /// Number of graph nodes the tree covers.
    pub fn n_graph_nodes(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, u: usize) -> usize {
        self.owner[u]
    }

    pub(crate) fn set_owner(&mut self, u: usize, idx: usize) {
        self.owner[u] = idx;
    }

    pub(crate) fn rebuild_owner(&mut self, n: usize) {
        self.owner.clear();
        self.owner.resize(n, usize::MAX);
        for (i, t) in self.nodes.iter().enumerate() {
            for &u in &t.nodes {
                self.owner[u] = i;
            }
        }
    }

    /// Tree indices of the subtree rooted at `root`, in breadth-first order.
    pub fn subtree(&self, root: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut lo = root;
        let mut width = 1;
        while lo < self.nodes.len() {
            out.extend(lo..lo + width);
            lo = 2 * lo + 1;
            width *= 2;
        }
        out
    }

    /// Graph nodes stored anywhere in the subtree of `root`.
    pub fn subtree_union(&self, root: usize) -> Vec<usize> {
        let mut all: Vec<usize> = self
            .subtree(root)
            .into_iter()
            .flat_map(|i| self.nodes[i].nodes.iter().copied())
            .collect();
        all.sort_unstable();
        all
    }

    pub fn subtree_size(&self, root: usize) -> usize {
        self.subtree(root).into_iter().map(|i| self.nodes[i].nodes.len()).sum()
    }

    /// Rebuilds the subtree at `root` over `region`, which must equal the
    /// nodes it currently stores. Other tree nodes are left untouched.
    pub fn redecompose(&mut self, root: usize, g: &SymGraph, region: &[usize], dec: Decomposer<'_>) -> Result<()> {
        let mut region = region.to_vec();
        region.sort_unstable();
        if region != self.subtree_union(root) {
            return Err(Error::RegionMismatch { root });
        }
        if let Some(&bad) = region.iter().find(|&&u| u >= g.n_nodes()) {
            return Err(Error::IndexOutOfBounds {
                index: bad,
                bound: g.n_nodes(),
            });
        }
        for i in self.subtree(root) {
            self.nodes[i] = HgdNode::default();
        }
        let mut scratch = vec![usize::MAX; g.n_nodes()];
        self.decompose(g, root, region, dec, &mut scratch);
        Ok(())
    }

    /// Node sets are pairwise disjoint and cover `[0, n)`.
    pub fn check_partition(&self, n: usize) -> std::result::Result<(), String> {
        let mut seen = vec![false; n];
        let mut count = 0;
        for (i, t) in self.nodes.iter().enumerate() {
            for &u in &t.nodes {
                if u >= n {
                    return Err(format!("tree node {i} holds out-of-range node {u}"));
                }
                if std::mem::replace(&mut seen[u], true) {
                    return Err(format!("graph node {u} stored twice"));
                }
                count += 1;
            }
        }
        if count != n {
            return Err(format!("{count} of {n} graph nodes stored"));
        }
        Ok(())
    }

    /// Every edge joins tree nodes on a common root path.
    pub fn check_separators(&self, g: &SymGraph) -> std::result::Result<(), String> {
        match self.violated_separators(g).first() {
            None => Ok(()),
            Some(&(s, (u, v))) => Err(format!(
                "edge ({u}, {v}) crosses separator at tree index {s}"
            )),
        }
    }

    /// Tree indices whose separator property fails, with one witness edge each.
    pub fn violated_separators(&self, g: &SymGraph) -> Vec<(usize, (usize, usize))> {
        let mut out: Vec<(usize, (usize, usize))> = Vec::new();
        for (u, v) in g.edges() {
            let (a, b) = (self.owner[u], self.owner[v]);
            if !is_ancestor_or_self(a, b) && !is_ancestor_or_self(b, a) {
                let s = lca(a, b);
                if !out.iter().any(|(x, _)| *x == s) {
                    out.push((s, (u, v)));
                }
            }
        }
        out.sort_unstable();
        out
    }
}
