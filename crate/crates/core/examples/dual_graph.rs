//! Graph duals of sparsity patterns, with and without block compression.

use parth::graph::{build_dual, compress_by_dim, edge_set_diff, NodeMap, SparsityPattern};

pub fn main() {
    // 3 mesh vertices on a path, each carrying 2 degrees of freedom
    let blocks = [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)];
    let dim = 2;
    let entries = blocks
        .iter()
        .flat_map(|&(r, c)| (0..dim).flat_map(move |a| (0..dim).map(move |b| (dim * r + a, dim * c + b))));
    let pattern = SparsityPattern::from_entries(3 * dim, entries).unwrap();

    let full = build_dual(&pattern).unwrap();
    let compressed = compress_by_dim(&pattern, dim).unwrap();
    println!("dual: {} nodes, {} edges", full.n_nodes(), full.n_edges());
    println!("compressed (dim {dim}): {} nodes, {:?}", compressed.n_nodes(), compressed.edges().collect::<Vec<_>>());

    let closed = SparsityPattern::symmetric_with_diagonal(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let delta = edge_set_diff(&compressed, &build_dual(&closed).unwrap(), &NodeMap::identity(3)).unwrap();
    println!("closing the triangle adds {:?}, removes {:?}", delta.added, delta.removed);
}
