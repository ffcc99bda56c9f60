//! The nine-node worked example: one edge removed and two added, tracked on a
//! hand-built three-level tree.

use parth::graph::{edge_set_diff, NodeMap, SymGraph};
use parth::hgd::{Decomposer, HgdTree};
use parth::separator::LevelSetSeparator;
use parth::synchronizer::{dirty_subgraph_detection, map_edges_to_tree, synchronize};

pub fn main() {
    let g1 = SymGraph::from_edges(
        9,
        [(0, 1), (1, 4), (0, 5), (1, 7), (5, 6), (6, 7), (2, 3), (2, 8), (3, 4), (4, 8), (1, 2)],
    )
    .unwrap();
    let mut edges: Vec<_> = g1.edges().filter(|&e| e != (2, 8)).collect();
    edges.extend([(0, 6), (3, 8)]);
    let g2 = SymGraph::from_edges(9, edges).unwrap();

    let sets = vec![vec![0, 1, 4], vec![6], vec![2], vec![5], vec![7], vec![3], vec![8]];
    let mut tree = HgdTree::from_node_sets(2, sets, 9).unwrap();
    let map = NodeMap::identity(9);

    let delta = edge_set_diff(&g1, &g2, &map).unwrap();
    println!("added {:?}, removed {:?}", delta.added, delta.removed);
    let changes = map_edges_to_tree(&tree, &delta.added, &delta.removed);
    for c in &changes.cross {
        println!("  <B[{}], B[{}]> {:?}", c.a, c.b, c.kind);
    }
    let (d_f, d_c) = dirty_subgraph_detection(&changes);
    println!("fine {d_f:?}, coarse {d_c:?}");

    let sep = LevelSetSeparator::default();
    let dirty = synchronize(&mut tree, &g1, &g2, &map, Decomposer::new(&sep, 0).with_min_split(3), None).unwrap();
    let flags: Vec<char> = dirty.c_b.iter().map(|&c| if c { 'T' } else { 'F' }).collect();
    println!("C_B {flags:?}");
    for i in 0..tree.len() {
        println!("  B[{i}] = {:?}", tree.node(i).nodes);
    }
}
