//! Plug a caller-defined local ordering into the engine.

use parth::graph::SymGraph;
use parth::ordering::{OrderingEngine, Permutation};
use parth::separator::LevelSetSeparator;
use parth::symbolic::symbolic_analyze;
use parth::synthetic::grid_laplacian;
use parth::{Parth, ParthConfig};

/// Orders nodes by increasing degree, ties by index.
struct DegreeSort;

impl OrderingEngine for DegreeSort {
    fn name(&self) -> &str {
        "degree_sort"
    }

    fn order(&self, g: &SymGraph, _seed: u64) -> Permutation {
        let mut v: Vec<usize> = (0..g.n_nodes()).collect();
        v.sort_by_key(|&u| (g.degree(u), u));
        Permutation::new(v).expect("sorted indices form a permutation")
    }
}

pub fn main() {
    let (p, _) = grid_laplacian(24, 24).unwrap();
    let config = ParthConfig::default();
    for (name, engine) in [
        ("degree sort", Box::new(DegreeSort) as Box<dyn OrderingEngine>),
        ("min degree", config.ordering.engine()),
    ] {
        let mut parth = Parth::with_engines(config.clone(), Box::new(LevelSetSeparator::default()), engine);
        let out = parth.compute(&p, None).unwrap();
        println!("{name:>11}: nnz(L) {}", symbolic_analyze(&p, out.permutation()).unwrap().nnz_l);
    }
}
