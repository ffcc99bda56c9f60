mod common;

use parth::graph::{NodeMap, SymGraph};
use parth::hgd::{hgd_build, is_ancestor_or_self, Decomposer, HgdTree};
use parth::separator::{compute_min_separator, LevelSetSeparator};
use parth::synchronizer::synchronize;
use parth::{MaxLevel, Parth, ParthConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{dirty_work_bound, is_bijection, random_banded_graph, random_delta};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = SymGraph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |e| SymGraph::from_edges(n, e).unwrap())
    })
}

/// Every violated separator found by an exhaustive edge scan.
fn brute_force_violations(tree: &HgdTree, g: &SymGraph) -> Vec<usize> {
    let mut out: Vec<usize> = g
        .edges()
        .filter_map(|(u, v)| {
            let (a, b) = (tree.owner(u), tree.owner(v));
            (!is_ancestor_or_self(a, b) && !is_ancestor_or_self(b, a)).then(|| parth::hgd::lca(a, b))
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

proptest! {
    #[test]
    fn separator_is_valid(g in graph_strategy(60), seed in any::<u64>()) {
        let s = compute_min_separator(&g, &LevelSetSeparator::default(), seed);
        prop_assert!(s.verify(&g).is_ok());
        prop_assert_eq!(s.sep.len() + s.left.len() + s.right.len(), g.n_nodes());
        prop_assert_eq!(s.clone(), compute_min_separator(&g, &LevelSetSeparator::default(), seed));
    }

    #[test]
    fn build_invariants(g in graph_strategy(120), level in 0usize..6, seed in any::<u64>()) {
        let t = hgd_build(&g, level, &LevelSetSeparator::default(), seed);
        prop_assert_eq!(t.len(), (1 << (level + 1)) - 1);
        prop_assert!(t.check_partition(g.n_nodes()).is_ok());
        prop_assert!(t.check_separators(&g).is_ok());
        prop_assert!(brute_force_violations(&t, &g).is_empty());
        prop_assert_eq!(t, hgd_build(&g, level, &LevelSetSeparator::default(), seed));
    }

    #[test]
    fn synchronize_is_sound_and_complete(seed in any::<u64>(), n in 2usize..150, level in 1usize..5, nodes in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_banded_graph(&mut rng, n, 5, 3.0);
        let sep = LevelSetSeparator::default();
        let dec = Decomposer::new(&sep, seed).with_min_split(3);
        let mut tree = HgdTree::build(&g, level, dec);
        let (g2, map) = random_delta(&mut rng, &g, nodes);
        // violations the new edges cause on the tree, seen before synchronizing
        let before = if map.is_identity() {
            brute_force_violations(&tree, &g2)
        } else {
            vec![]
        };
        let dirty = synchronize(&mut tree, &g, &g2, &map, dec, None).unwrap();
        prop_assert!(tree.check_partition(g2.n_nodes()).is_ok());
        prop_assert!(brute_force_violations(&tree, &g2).is_empty());
        for s in before {
            prop_assert!(!dirty.c_b[s], "violated separator {} kept", s);
        }
    }

    #[test]
    fn resynchronizing_same_graph_changes_nothing(seed in any::<u64>(), n in 2usize..150) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_banded_graph(&mut rng, n, 5, 3.0);
        let sep = LevelSetSeparator::default();
        let dec = Decomposer::new(&sep, seed).with_min_split(3);
        let mut tree = HgdTree::build(&g, 3, dec);
        let (g2, map) = random_delta(&mut rng, &g, true);
        synchronize(&mut tree, &g, &g2, &map, dec, Some(0.3)).unwrap();
        let snapshot = tree.clone();
        let dirty = synchronize(&mut tree, &g2, &g2, &NodeMap::identity(g2.n_nodes()), dec, Some(0.3)).unwrap();
        prop_assert!(dirty.c_b.iter().all(|&c| c));
        prop_assert_eq!(tree, snapshot);
    }

    #[test]
    fn engine_steps_stay_consistent(seed in any::<u64>(), n in 1usize..150, aggressive in prop::option::of(0.05f64..1.0)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = random_banded_graph(&mut rng, n, 4, 2.5);
        let mut parth = Parth::new(ParthConfig {
            max_level: MaxLevel::Fixed(4),
            min_split: 4,
            aggressive,
            seed,
            ..Default::default()
        });
        parth.compute_graph(g.clone(), None).unwrap();
        for step in 0..4 {
            let (g2, map) = random_delta(&mut rng, &g, step % 2 == 0);
            let out = parth.compute_graph(g2.clone(), Some(&map)).unwrap();
            prop_assert!(is_bijection(out.permutation().as_slice()));
            prop_assert_eq!(out.permutation().len(), g2.n_nodes());
            let tree = parth.tree().unwrap();
            prop_assert!(tree.check_separators(&g2).is_ok());
            prop_assert!(out.assembly.recomputed_graph_nodes <= dirty_work_bound(tree, &out.dirty));
            prop_assert_eq!(out.assembly.recomputed_graph_nodes + out.assembly.reused_nodes, g2.n_nodes());
            g = g2;
        }
    }
}

#[test]
fn redecompose_checks_region() {
    let g = SymGraph::from_edges(20, (0..19).map(|i| (i, i + 1))).unwrap();
    let sep = LevelSetSeparator::default();
    let mut t = HgdTree::build(&g, 2, Decomposer::new(&sep, 0).with_min_split(3));
    let region = t.subtree_union(1);
    t.redecompose(1, &g, &region, Decomposer::new(&sep, 9).with_min_split(3)).unwrap();
    t.check_partition(20).unwrap();
    t.check_separators(&g).unwrap();
    assert!(t.redecompose(1, &g, &[0], Decomposer::new(&sep, 0)).is_err());
}
