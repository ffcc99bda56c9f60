//! Symbolic factor sizes for natural, minimum-degree and nested-dissection
//! orderings.

use parth::graph::{build_dual, SparsityPattern};
use parth::ordering::{MinDegree, OrderingEngine, Permutation};
use parth::symbolic::{elimination_tree, symbolic_analyze};
use parth::synthetic::grid_laplacian;
use parth::{full_recompute, ParthConfig};

fn arrowhead(n: usize) -> SparsityPattern {
    SparsityPattern::symmetric_with_diagonal(n, (1..n).map(|i| (0, i))).unwrap()
}

pub fn main() {
    for n in [4, 16, 64] {
        let p = arrowhead(n);
        let md = MinDegree.order(&build_dual(&p).unwrap(), 0);
        let nat = symbolic_analyze(&p, &Permutation::identity(n)).unwrap();
        let min = symbolic_analyze(&p, &md).unwrap();
        println!("arrowhead {n:>2}: nnz(L) natural {:>4}, min degree {:>4}", nat.nnz_l, min.nnz_l);
    }

    let (grid, _) = grid_laplacian(32, 32).unwrap();
    let nd = full_recompute(&ParthConfig::default(), &grid).unwrap();
    let nat = symbolic_analyze(&grid, &Permutation::identity(grid.n_rows())).unwrap();
    let ours = symbolic_analyze(&grid, nd.permutation()).unwrap();
    println!(
        "grid 32x32: nnz(L) natural {}, parth {} (flops {:.2e} vs {:.2e})",
        nat.nnz_l, ours.nnz_l, nat.flop_estimate as f64, ours.flop_estimate as f64
    );
    let roots = elimination_tree(&grid, nd.permutation())
        .unwrap()
        .parent
        .iter()
        .filter(|p| p.is_none())
        .count();
    println!("elimination tree roots: {roots}");
}
