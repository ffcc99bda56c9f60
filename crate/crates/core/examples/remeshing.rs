//! Replace a patch of a grid by a denser one and carry the ordering across
//! the change of size with a node map.

use parth::symbolic::fill_deviation;
use parth::synthetic::{grid_laplacian, patch_remesh};
use parth::{full_recompute, Parth, ParthConfig};

pub fn main() {
    let (grid, _) = grid_laplacian(64, 64).unwrap();
    let config = ParthConfig::default();
    let mut parth = Parth::new(config.clone());
    parth.compute(&grid, None).unwrap();

    let mut pattern = grid;
    for (k, center) in [1000, 2222, 3100].into_iter().enumerate() {
        let (next, map) = patch_remesh(&pattern, center, 4, 1.5, k as u64).unwrap();
        let added = map.added().count();
        let step = parth.compute(&next, Some(&map)).unwrap();
        let full = full_recompute(&config, &next).unwrap();
        let dev = fill_deviation(step.permutation(), full.permutation(), &next).unwrap();
        println!(
            "patch {k}: {} -> {} rows ({added} new), reuse {:.3}, fill vs rebuild {:+.3}",
            pattern.n_rows(),
            next.n_rows(),
            step.reuse_ratio(),
            dev
        );
        pattern = next;
    }
}
