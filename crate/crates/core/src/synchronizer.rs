//! Carries a decomposition from one graph to the next.
//!
//! Node additions and removals are applied to the tree node sets first, then
//! the edge delta is mapped onto tree indices. An added edge whose endpoints
//! lie in disjoint subtrees breaks the separator at their lowest common
//! ancestor, so that whole subtree is rebuilt (coarse dirt). A change inside a
//! single tree node only invalidates that node's local ordering (fine dirt).
//! Edges between a separator and one of its descendants never break anything.

use std::collections::VecDeque;

use crate::error::Result;
use crate::graph::{edge_set_diff, EdgeDelta, NodeMap, SymGraph};
use crate::hgd::{is_ancestor_or_self, lca, level_of, Decomposer, HgdTree};

/// Default share of graph nodes a coarse region must exceed before
/// aggressive reuse steps in.
pub const DEFAULT_AGGRESSIVE_THETA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChangeKind {
    Added,
    Removed,
}

/// An edge change between two distinct tree nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEdgeChange {
    pub a: usize,
    pub b: usize,
    /// Graph endpoints (new-graph indexing).
    pub u: usize,
    pub v: usize,
    pub kind: ChangeKind,
}

impl TreeEdgeChange {
    pub fn is_ancestor_related(&self) -> bool {
        is_ancestor_or_self(self.a, self.b) || is_ancestor_or_self(self.b, self.a)
    }
}

/// Edge changes expressed on the tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeChanges {
    pub cross: Vec<TreeEdgeChange>,
    /// Tree nodes with a change between two of their own graph nodes.
    pub fine: Vec<usize>,
}

/// Reuse mask and dirty sets after synchronization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirtyState {
    /// `true` = stored local ordering is still valid.
    pub c_b: Vec<bool>,
    /// Fine-grain dirty tree nodes.
    pub d_f: Vec<usize>,
    /// Roots of re-decomposed subtrees.
    pub d_c: Vec<usize>,
}

impl DirtyState {
    pub fn all_clean(len: usize) -> Self {
        DirtyState {
            c_b: vec![true; len],
            d_f: Vec::new(),
            d_c: Vec::new(),
        }
    }

    pub fn all_dirty(len: usize) -> Self {
        DirtyState {
            c_b: vec![false; len],
            d_f: Vec::new(),
            d_c: vec![0],
        }
    }

    pub fn changed(&self) -> impl Iterator<Item = usize> + '_ {
        self.c_b.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| i)
    }
}

/// Applies `map` to the tree node sets and places added nodes.
///
/// Surviving nodes keep their position in their tree node (so stored local
/// orderings stay aligned), removed nodes are deleted and added nodes are
/// appended. Each connected group of added nodes goes to the deepest tree
/// node related to the owners of all the group's surviving neighbours, so no
/// added edge crosses a separator. A group without surviving neighbours joins
/// the tree node of the nearest placed node; an isolated group goes to the
/// root. Returns the sorted tree indices whose sets changed.
pub fn node_change_synchronizer(tree: &mut HgdTree, map: &NodeMap, g_new: &SymGraph) -> Result<Vec<usize>> {
    map.check_sizes(tree.n_graph_nodes(), g_new.n_nodes())?;
    let n_new = g_new.n_nodes();
    let mut touched = Vec::new();
    if map.is_identity() {
        return Ok(touched);
    }
    let old_to_new = map.old_to_new();
    for i in 0..tree.len() {
        let t = tree.node_mut(i);
        let before = t.nodes.len();
        t.nodes = t.nodes.iter().filter_map(|&u| old_to_new[u]).collect();
        if t.nodes.len() != before {
            t.local_perm = None;
            touched.push(i);
        }
    }
    tree.rebuild_owner(n_new);

    // added nodes are placed one connected component at a time
    let added: Vec<usize> = map.added().collect();
    let mut is_added = vec![false; n_new];
    for &u in &added {
        is_added[u] = true;
    }
    let mut seen = vec![false; n_new];
    for &start in &added {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut owners = Vec::new();
        let mut k = 0;
        while k < comp.len() {
            let u = comp[k];
            k += 1;
            for &v in g_new.neighbors(u) {
                if is_added[v] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                } else {
                    owners.push(tree.owner(v));
                }
            }
        }
        comp.sort_unstable();
        owners.sort_unstable();
        owners.dedup();
        let target = if owners.is_empty() {
            nearest_placed(tree, g_new, start).map_or(0, |v| tree.owner(v))
        } else {
            placement_target(&owners)
        };
        let t = tree.node_mut(target);
        t.nodes.extend_from_slice(&comp);
        t.local_perm = None;
        for &u in &comp {
            tree.set_owner(u, target);
        }
        touched.push(target);
    }
    touched.sort_unstable();
    touched.dedup();
    Ok(touched)
}

/// Deepest tree node related to every owner: the deepest owner when they lie
/// on one root path, their common ancestor otherwise.
fn placement_target(owners: &[usize]) -> usize {
    let deepest = *owners.iter().max_by_key(|&&t| (level_of(t), t)).expect("non-empty");
    if owners.iter().all(|&o| is_ancestor_or_self(o, deepest)) {
        deepest
    } else {
        owners.iter().copied().reduce(lca).expect("non-empty")
    }
}

fn nearest_placed(tree: &HgdTree, g: &SymGraph, start: usize) -> Option<usize> {
    let mut seen = vec![false; g.n_nodes()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if seen[v] {
                continue;
            }
            if tree.owner(v) != usize::MAX {
                return Some(v);
            }
            seen[v] = true;
            queue.push_back(v);
        }
    }
    None
}

/// Maps graph edge changes (both in new-graph indexing) onto tree nodes.
pub fn map_edges_to_tree(tree: &HgdTree, added: &[(usize, usize)], removed: &[(usize, usize)]) -> TreeChanges {
    let mut out = TreeChanges::default();
    let tagged = added
        .iter()
        .map(|&e| (e, ChangeKind::Added))
        .chain(removed.iter().map(|&e| (e, ChangeKind::Removed)));
    for ((u, v), kind) in tagged {
        let (a, b) = (tree.owner(u), tree.owner(v));
        if a == b {
            out.fine.push(a);
        } else {
            out.cross.push(TreeEdgeChange { a, b, u, v, kind });
        }
    }
    out.fine.sort_unstable();
    out.fine.dedup();
    out
}

/// Splits changes into fine-grain dirty tree nodes and coarse-grain subtree
/// roots (lowest common ancestors of added edges across disjoint subtrees).
pub fn dirty_subgraph_detection(changes: &TreeChanges) -> (Vec<usize>, Vec<usize>) {
    let d_f = changes.fine.clone();
    let mut d_c: Vec<usize> = changes
        .cross
        .iter()
        .filter(|c| c.kind == ChangeKind::Added && !c.is_ancestor_related())
        .map(|c| lca(c.a, c.b))
        .collect();
    d_c.sort_unstable();
    d_c.dedup();
    (d_f, d_c)
}

/// Drops coarse roots nested in other coarse roots and fine nodes covered by
/// any coarse subtree.
pub fn filter_redundant_subgraphs(d_f: &[usize], d_c: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut coarse: Vec<usize> = d_c.to_vec();
    coarse.sort_unstable();
    coarse.dedup();
    let kept: Vec<usize> = coarse
        .iter()
        .copied()
        .filter(|&c| !coarse.iter().any(|&o| o != c && is_ancestor_or_self(o, c)))
        .collect();
    let mut fine: Vec<usize> = d_f
        .iter()
        .copied()
        .filter(|&f| !kept.iter().any(|&c| is_ancestor_or_self(c, f)))
        .collect();
    fine.sort_unstable();
    fine.dedup();
    (fine, kept)
}

/// Rebuilds every coarse subtree and produces the reuse mask.
pub fn mark_and_decompose(
    tree: &mut HgdTree,
    g_new: &SymGraph,
    d_f: &[usize],
    d_c: &[usize],
    dec: Decomposer<'_>,
) -> Result<DirtyState> {
    let mut state = DirtyState::all_clean(tree.len());
    for &f in d_f {
        state.c_b[f] = false;
    }
    for &c in d_c {
        let region = tree.subtree_union(c);
        tree.redecompose(c, g_new, &region, dec)?;
        for i in tree.subtree(c) {
            state.c_b[i] = false;
        }
    }
    state.d_f = d_f.to_vec();
    state.d_c = d_c.to_vec();
    Ok(state)
}

/// Result of [`aggressive_reuse`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AggressiveOutcome {
    /// `(graph node, from tree index, to tree index)`.
    pub moved: Vec<(usize, usize, usize)>,
    /// Tree nodes whose sets changed through moves.
    pub extra_fine: Vec<usize>,
}

/// Avoids rebuilding large subtrees for isolated separator violations.
///
/// For each added edge that would force re-decomposition of a subtree holding
/// more than `theta` of all graph nodes, one endpoint is moved into the
/// violated separator: the endpoint whose tree node is smaller (ties: lower
/// graph index). A move that would leave any of the node's edges crossing a
/// separator is skipped and the change stays coarse. Changes are updated to
/// the new owners.
pub fn aggressive_reuse(
    tree: &mut HgdTree,
    g_new: &SymGraph,
    changes: &mut [TreeEdgeChange],
    theta: f64,
) -> AggressiveOutcome {
    let n = tree.n_graph_nodes();
    let mut out = AggressiveOutcome::default();
    for &c in changes.iter() {
        if c.kind != ChangeKind::Added {
            continue;
        }
        let (a, b) = (tree.owner(c.u), tree.owner(c.v));
        if a == b || is_ancestor_or_self(a, b) || is_ancestor_or_self(b, a) {
            continue;
        }
        let s = lca(a, b);
        if tree.subtree_size(s) as f64 <= theta * n as f64 {
            continue;
        }
        let (x, from) = match tree.node(a).nodes.len().cmp(&tree.node(b).nodes.len()) {
            std::cmp::Ordering::Less => (c.u, a),
            std::cmp::Ordering::Greater => (c.v, b),
            std::cmp::Ordering::Equal if c.u < c.v => (c.u, a),
            _ => (c.v, b),
        };
        let ok = g_new.neighbors(x).iter().all(|&y| {
            let o = tree.owner(y);
            is_ancestor_or_self(o, s) || is_ancestor_or_self(s, o)
        });
        if !ok {
            continue;
        }
        move_node(tree, x, from, s);
        out.moved.push((x, from, s));
        out.extra_fine.extend([from, s]);
    }
    for c in changes.iter_mut() {
        c.a = tree.owner(c.u);
        c.b = tree.owner(c.v);
    }
    out.extra_fine.sort_unstable();
    out.extra_fine.dedup();
    out
}

fn move_node(tree: &mut HgdTree, x: usize, from: usize, to: usize) {
    let src = tree.node_mut(from);
    let pos = src.nodes.iter().position(|&u| u == x).expect("node stored in source");
    src.nodes.remove(pos);
    src.local_perm = None;
    let dst = tree.node_mut(to);
    dst.nodes.push(x);
    dst.local_perm = None;
    tree.set_owner(x, to);
}

/// Full synchronization of `tree` (built over `g_old`) to `g_new`.
///
/// `aggressive` enables [`aggressive_reuse`] with the given threshold.
pub fn synchronize(
    tree: &mut HgdTree,
    g_old: &SymGraph,
    g_new: &SymGraph,
    map: &NodeMap,
    dec: Decomposer<'_>,
    aggressive: Option<f64>,
) -> Result<DirtyState> {
    let delta = edge_set_diff(g_old, g_new, map)?;
    let touched = node_change_synchronizer(tree, map, g_new)?;
    let EdgeDelta { added, removed } = delta;
    let old_to_new = map.old_to_new();
    let removed: Vec<(usize, usize)> = removed
        .into_iter()
        .map(|(a, b)| {
            (
                old_to_new[a].expect("removed edges join surviving nodes"),
                old_to_new[b].expect("removed edges join surviving nodes"),
            )
        })
        .collect();

    let mut changes = map_edges_to_tree(tree, &added, &removed);
    let mut extra = Vec::new();
    if let Some(theta) = aggressive {
        let outcome = aggressive_reuse(tree, g_new, &mut changes.cross, theta);
        if !outcome.moved.is_empty() {
            extra = outcome.extra_fine;
            // owners changed; edges may now sit inside one tree node
            changes = map_edges_to_tree(tree, &added, &removed);
        }
    }
    let (mut d_f, d_c) = dirty_subgraph_detection(&changes);
    d_f.extend(touched);
    d_f.extend(extra);
    let (d_f, d_c) = filter_redundant_subgraphs(&d_f, &d_c);
    let state = mark_and_decompose(tree, g_new, &d_f, &d_c, dec)?;
    debug_assert_eq!(tree.check_partition(g_new.n_nodes()), Ok(()));
    debug_assert_eq!(tree.check_separators(g_new), Ok(()));
    Ok(state)
}
