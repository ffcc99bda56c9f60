#![allow(dead_code)]

use parth::graph::{edge, Edge, NodeMap, SparsityPattern, SymGraph};
use parth::hgd::HgdTree;
use parth::ordering::Permutation;
use parth::symbolic::symbolic_analyze;
use parth::synchronizer::DirtyState;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random graph with `n` nodes and about `n * avg_degree / 2` edges.
pub fn random_graph(rng: &mut impl Rng, n: usize, avg_degree: f64) -> SymGraph {
    let m = ((n as f64) * avg_degree / 2.0).round() as usize;
    let mut edges = Vec::with_capacity(m);
    if n >= 2 {
        for _ in 0..m {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v {
                edges.push(edge(u, v));
            }
        }
    }
    SymGraph::from_edges(n, edges).unwrap()
}

/// Graph with nodes placed on a line and edges only between nearby
/// indices, so decompositions have meaningful separators.
pub fn random_banded_graph(rng: &mut impl Rng, n: usize, band: usize, avg_degree: f64) -> SymGraph {
    let m = ((n as f64) * avg_degree / 2.0).round() as usize;
    let mut edges = Vec::with_capacity(m);
    if n >= 2 {
        for _ in 0..m {
            let u = rng.random_range(0..n);
            let v = (u + rng.random_range(1..=band.max(1))).min(n - 1);
            if u != v {
                edges.push(edge(u, v));
            }
        }
    }
    SymGraph::from_edges(n, edges).unwrap()
}

/// Random edge insertions and deletions plus, optionally, node removals and
/// additions. Survivors keep their order; added nodes are appended.
pub fn random_delta(rng: &mut impl Rng, g: &SymGraph, node_changes: bool) -> (SymGraph, NodeMap) {
    let n = g.n_nodes();
    let mut edges: Vec<Edge> = g.edges().collect();
    edges.shuffle(rng);
    let drop = rng.random_range(0..=edges.len().min(5));
    edges.truncate(edges.len() - drop);
    for _ in 0..rng.random_range(0..=6) {
        if n >= 2 {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v {
                edges.push(edge(u, v));
            }
        }
    }
    if !node_changes || n < 2 {
        return (SymGraph::from_edges(n, edges).unwrap(), NodeMap::identity(n));
    }
    let n_remove = rng.random_range(0..=(n / 10).min(5));
    let mut removed = vec![false; n];
    for _ in 0..n_remove {
        removed[rng.random_range(0..n)] = true;
    }
    let mut old_to_new = vec![usize::MAX; n];
    let mut entries = Vec::new();
    for u in 0..n {
        if !removed[u] {
            old_to_new[u] = entries.len();
            entries.push(Some(u));
        }
    }
    let s = entries.len();
    let n_add = rng.random_range(0..=5);
    entries.extend(std::iter::repeat_n(None, n_add));
    let n_new = s + n_add;
    let mut new_edges: Vec<Edge> = edges
        .into_iter()
        .filter(|&(u, v)| !removed[u] && !removed[v])
        .map(|(u, v)| edge(old_to_new[u], old_to_new[v]))
        .collect();
    for a in s..n_new {
        for _ in 0..rng.random_range(0..=3) {
            let v = rng.random_range(0..n_new);
            if v != a {
                new_edges.push(edge(a, v));
            }
        }
    }
    let g_new = SymGraph::from_edges(n_new, new_edges).unwrap();
    (g_new, NodeMap::new(entries, n).unwrap())
}

/// Hub node 0 joined to every other node.
pub fn arrowhead(n: usize) -> SparsityPattern {
    SparsityPattern::symmetric_with_diagonal(n, (1..n).map(|i| (0, i))).unwrap()
}

/// Smallest nnz(L) over every permutation; only for tiny `n`.
pub fn brute_force_min_nnz_l(pattern: &SparsityPattern) -> usize {
    fn rec(k: usize, perm: &mut Vec<usize>, pattern: &SparsityPattern, best: &mut usize) {
        if k == perm.len() {
            let p = Permutation::new(perm.clone()).unwrap();
            *best = (*best).min(symbolic_analyze(pattern, &p).unwrap().nnz_l);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, pattern, best);
            perm.swap(k, i);
        }
    }
    let mut perm: Vec<usize> = (0..pattern.n_rows()).collect();
    let mut best = usize::MAX;
    rec(0, &mut perm, pattern, &mut best);
    best
}

/// Dense Cholesky solve of the matrix given by `pattern` and `values`.
pub fn dense_solve(pattern: &SparsityPattern, values: &[f64], b: &[f64]) -> Vec<f64> {
    let n = pattern.n_rows();
    let mut a = vec![0.0; n * n];
    for (k, (r, c)) in pattern.entries().enumerate() {
        a[r * n + c] = values[k];
    }
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        assert!(d > 0.0, "dense oracle: matrix not positive definite");
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= a[i * n + k] * y[k];
        }
        y[i] /= a[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= a[k * n + i] * y[k];
        }
        y[i] /= a[i * n + i];
    }
    y
}

/// Number of graph nodes held by the filtered dirty sets: fine-grain tree
/// nodes plus every subtree rooted in the coarse set.
pub fn dirty_work_bound(tree: &HgdTree, dirty: &DirtyState) -> usize {
    let mut marked = vec![false; tree.len()];
    for &i in &dirty.d_f {
        marked[i] = true;
    }
    for &r in &dirty.d_c {
        for i in tree.subtree(r) {
            marked[i] = true;
        }
    }
    (0..tree.len()).filter(|&i| marked[i]).map(|i| tree.node(i).nodes.len()).sum()
}

/// `true` when every position appears exactly once.
pub fn is_bijection(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}
