//! A single edge joining the two halves of a grid breaks the root separator.
//! Without aggressive reuse the whole tree is rebuilt; with it, one endpoint
//! moves into the separator instead.

use parth::graph::{build_dual, SymGraph};
use parth::hgd::is_ancestor_or_self;
use parth::synchronizer::DEFAULT_AGGRESSIVE_THETA;
use parth::synthetic::grid_laplacian;
use parth::{Parth, ParthConfig};

fn cross_root_edge(parth: &Parth, g: &SymGraph) -> (usize, usize) {
    let tree = parth.tree().unwrap();
    let under = |child| {
        (0..g.n_nodes())
            .find(|&u| tree.owner(u) != child && is_ancestor_or_self(child, tree.owner(u)))
            .unwrap()
    };
    (under(1), under(2))
}

pub fn main() {
    let (p, _) = grid_laplacian(64, 64).unwrap();
    let g = build_dual(&p).unwrap();
    for aggressive in [None, Some(DEFAULT_AGGRESSIVE_THETA)] {
        let mut parth = Parth::new(ParthConfig {
            aggressive,
            ..Default::default()
        });
        parth.compute_graph(g.clone(), None).unwrap();
        let (u, v) = cross_root_edge(&parth, &g);
        let g2 = SymGraph::from_edges(g.n_nodes(), g.edges().chain([(u, v)])).unwrap();
        let out = parth.compute_graph(g2, None).unwrap();
        println!(
            "aggressive {:<9} edge ({u}, {v}): reuse {:.3}, {} tree nodes recomputed",
            format!("{aggressive:?}"),
            out.reuse_ratio(),
            out.assembly.recomputed_tree_nodes
        );
    }
}
