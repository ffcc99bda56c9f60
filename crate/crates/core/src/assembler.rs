//! Splices per-tree-node orderings into the graph and matrix permutations.
//!
//! Tree nodes are laid out in post-order, so every separator lands after the
//! two halves it separates. Only tree nodes whose reuse flag is cleared get
//! a fresh local ordering; the rest re-use the stored one at their current
//! offset.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{induced_with_scratch, SymGraph};
use crate::hgd::{tree_size, HgdTree};
use crate::ordering::{order_subgraph, OrderingEngine, Permutation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssemblyState {
    pub post_order: Vec<usize>,
    /// Graph-level permutation, `p_g[position] = graph node`.
    pub p_g: Permutation,
    /// Matrix-level permutation, `dim` rows per graph node.
    pub p_a: Permutation,
    /// Graph nodes whose local ordering was reused.
    pub reused_nodes: usize,
    pub recomputed_tree_nodes: usize,
    pub recomputed_graph_nodes: usize,
}

/// Post-order of the complete binary tree with `max_level` levels below the root.
pub fn post_order_indices(max_level: usize) -> Vec<usize> {
    fn visit(i: usize, size: usize, out: &mut Vec<usize>) {
        if i >= size {
            return;
        }
        visit(2 * i + 1, size, out);
        visit(2 * i + 2, size, out);
        out.push(i);
    }
    let size = tree_size(max_level);
    let mut out = Vec::with_capacity(size);
    visit(0, size, &mut out);
    out
}

/// Prefix sums of node-set sizes along `post_order`.
pub fn compute_offsets(tree: &mut HgdTree, post_order: &[usize]) {
    let mut offset = 0;
    for &i in post_order {
        let t = tree.node_mut(i);
        t.offset = offset;
        offset += t.nodes.len();
    }
}

/// Expands a graph permutation to `dim` consecutive matrix rows per node.
pub fn expand_by_dim(p_g: &Permutation, dim: usize) -> Permutation {
    let mut p_a = Vec::with_capacity(p_g.len() * dim);
    for &g in p_g.as_slice() {
        p_a.extend((0..dim).map(|d| g * dim + d));
    }
    Permutation::new_unchecked(p_a)
}

/// Options for [`assemble`].
#[derive(Clone, Copy)]
pub struct AssembleOptions<'e> {
    pub engine: &'e dyn OrderingEngine,
    pub seed: u64,
    pub dim: usize,
    /// Worker threads for recomputing local orderings; 1 runs inline.
    pub threads: usize,
}

/// Builds `p_g` and `p_a` from the tree, recomputing local orderings where
/// `c_b` is false. Pass an all-false mask on the first call.
pub fn assemble(tree: &mut HgdTree, g: &SymGraph, c_b: &[bool], opts: AssembleOptions<'_>) -> Result<AssemblyState> {
    let n = g.n_nodes();
    if tree.n_graph_nodes() != n {
        return Err(Error::StaleTree(format!(
            "tree covers {} nodes, graph has {n}",
            tree.n_graph_nodes()
        )));
    }
    if c_b.len() != tree.len() {
        return Err(Error::StaleTree(format!(
            "reuse mask has {} entries for {} tree nodes",
            c_b.len(),
            tree.len()
        )));
    }
    if opts.dim == 0 {
        return Err(Error::DimMismatch { n, dim: 0 });
    }
    for (i, t) in tree.nodes().iter().enumerate() {
        if let Some(&u) = t.nodes.iter().find(|&&u| u >= n) {
            return Err(Error::StaleTree(format!("tree node {i} references node {u}")));
        }
        if c_b[i] && t.local_perm.as_ref().map(Permutation::len) != Some(t.nodes.len()) {
            return Err(Error::StaleTree(format!(
                "tree node {i} marked reusable without a matching local ordering"
            )));
        }
    }

    let post_order = post_order_indices(tree.max_level());
    compute_offsets(tree, &post_order);

    let dirty: Vec<usize> = (0..tree.len()).filter(|&i| !c_b[i]).collect();
    let fresh: Vec<(usize, Permutation)> = if opts.threads > 1 && dirty.len() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::StaleTree(format!("thread pool: {e}")))?;
        let tree_ref = &*tree;
        pool.install(|| {
            dirty
                .par_iter()
                .map_init(
                    || vec![usize::MAX; n],
                    |scratch, &i| (i, order_local(g, &tree_ref.node(i).nodes, scratch, opts)),
                )
                .collect()
        })
    } else {
        let mut scratch = vec![usize::MAX; n];
        dirty
            .iter()
            .map(|&i| (i, order_local(g, &tree.node(i).nodes, &mut scratch, opts)))
            .collect()
    };
    let mut recomputed_graph_nodes = 0;
    for (i, perm) in fresh {
        recomputed_graph_nodes += perm.len();
        tree.node_mut(i).local_perm = Some(perm);
    }

    let mut p_g = vec![usize::MAX; n];
    for t in tree.nodes() {
        let perm = t.local_perm.as_ref().expect("every tree node ordered");
        for (k, &l) in perm.as_slice().iter().enumerate() {
            p_g[t.offset + k] = t.nodes[l];
        }
    }
    let p_g = Permutation::new(p_g).map_err(|e| Error::StaleTree(e.to_string()))?;
    let p_a = expand_by_dim(&p_g, opts.dim);
    Ok(AssemblyState {
        post_order,
        p_g,
        p_a,
        reused_nodes: n - recomputed_graph_nodes,
        recomputed_tree_nodes: dirty.len(),
        recomputed_graph_nodes,
    })
}

fn order_local(g: &SymGraph, nodes: &[usize], scratch: &mut [usize], opts: AssembleOptions<'_>) -> Permutation {
    for (k, &u) in nodes.iter().enumerate() {
        scratch[u] = k;
    }
    let sub = induced_with_scratch(g, nodes, scratch);
    for &u in nodes {
        scratch[u] = usize::MAX;
    }
    order_subgraph(&sub, opts.engine, opts.seed)
}

/// Share of graph nodes whose ordering was reused.
pub fn reuse_ratio(state: &AssemblyState, n_nodes: usize) -> f64 {
    if n_nodes == 0 {
        return 1.0;
    }
    state.reused_nodes as f64 / n_nodes as f64
}
