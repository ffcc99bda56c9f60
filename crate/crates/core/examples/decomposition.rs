//! Builds the decomposition tree of a grid and shows how tree nodes are laid
//! out in the final ordering.

use parth::assembler::{compute_offsets, post_order_indices};
use parth::graph::build_dual;
use parth::hgd::{hgd_build, level_of};
use parth::separator::LevelSetSeparator;
use parth::synthetic::grid_laplacian;

pub fn main() {
    let (p, _) = grid_laplacian(20, 20).unwrap();
    let g = build_dual(&p).unwrap();
    let mut tree = hgd_build(&g, 3, &LevelSetSeparator::default(), 0);
    tree.check_partition(g.n_nodes()).unwrap();
    tree.check_separators(&g).unwrap();

    let order = post_order_indices(tree.max_level());
    compute_offsets(&mut tree, &order);
    println!("{:>5} {:>6} {:>6} {:>7}", "index", "level", "nodes", "offset");
    for &i in &order {
        let t = tree.node(i);
        println!("{i:>5} {:>6} {:>6} {:>7}", level_of(i), t.nodes.len(), t.offset);
    }
}
