//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use parth::engine::{full_recompute, MaxLevel, Parth, ParthConfig, StepOutcome};
use parth::graph::{build_dual, NodeMap, SparsityPattern, SymGraph};
use parth::hgd::{is_ancestor_or_self, Decomposer, HgdTree};
use parth::metrics::{median, quantile};
use parth::ordering::{MinDegree, OrderingEngine, Permutation};
use parth::separator::LevelSetSeparator;
use parth::symbolic::{fill_deviation, numeric_cholesky_solve, symbolic_analyze};
use parth::synchronizer::{synchronize, DEFAULT_AGGRESSIVE_THETA};
use parth::synthetic::{grid_laplacian, inject_contacts, patch_remesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const GRID: usize = 64;
const BALL_RADIUS: usize = 5;
const CONTACTS: usize = 20;
const SEEDS: u64 = 50;
/// Aggressive-reuse threshold for the grid suite: any coarse region above a
/// tenth of the graph is handled by moving an endpoint instead.
const SUITE_THETA: f64 = 0.1;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

/// Work-proportionality violations seen by any suite.
#[derive(Default)]
struct WorkLedger {
    steps: usize,
    violations: Vec<String>,
}

impl WorkLedger {
    fn record(&mut self, suite: &str, parth: &Parth, out: &StepOutcome) {
        self.steps += 1;
        let tree = parth.tree().expect("tree after compute");
        let bound = dirty_work_bound(tree, &out.dirty);
        if out.assembly.recomputed_graph_nodes > bound {
            self.violations.push(format!(
                "{suite}: recomputed {} > dirty {}",
                out.assembly.recomputed_graph_nodes, bound
            ));
        }
    }
}

fn check_step(parth: &Parth, out: &StepOutcome, n_rows: usize) -> Result<(), String> {
    if !is_bijection(out.permutation().as_slice()) || out.permutation().len() != n_rows {
        return Err("permutation is not a bijection".into());
    }
    let (tree, g) = (parth.tree().unwrap(), parth.graph().unwrap());
    tree.check_partition(g.n_nodes())?;
    // exhaustive edge scan
    for (u, v) in g.edges() {
        let (a, b) = (tree.owner(u), tree.owner(v));
        if !is_ancestor_or_self(a, b) && !is_ancestor_or_self(b, a) {
            return Err(format!("edge ({u}, {v}) crosses a separator"));
        }
    }
    Ok(())
}

fn criterion_1(work: &mut WorkLedger) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut steps = 0;
    for trial in 0..500 {
        let n = rng.random_range(1..=200);
        let deg = rng.random_range(0.5..5.0);
        let g = if trial % 2 == 0 {
            random_graph(&mut rng, n, deg)
        } else {
            random_banded_graph(&mut rng, n, 6, deg)
        };
        let config = ParthConfig {
            max_level: MaxLevel::Fixed(rng.random_range(0..=5)),
            min_split: rng.random_range(2..=8),
            aggressive: rng.random_bool(0.5).then_some(rng.random_range(0.05..=1.0)),
            seed: trial,
            ..Default::default()
        };
        let mut parth = Parth::new(config);
        let mut g = g;
        let out = parth.compute_graph(g.clone(), None).unwrap();
        if let Err(e) = check_step(&parth, &out, n) {
            return verdict(false, format!("trial {trial}, first call: {e}"));
        }
        for s in 0..3 {
            let (g_new, map) = random_delta(&mut rng, &g, s % 2 == 1);
            let n_new = g_new.n_nodes();
            let out = match parth.compute_graph(g_new.clone(), Some(&map)) {
                Ok(o) => o,
                Err(e) => return verdict(false, format!("trial {trial}, step {s}: {e}")),
            };
            if let Err(e) = check_step(&parth, &out, n_new) {
                return verdict(false, format!("trial {trial}, step {s}: {e}"));
            }
            work.record("oracle", &parth, &out);
            steps += 1;
            g = g_new;
        }
    }
    verdict(true, format!("500 patterns, {steps} dynamic steps, no violation"))
}

fn criterion_2(work: &mut WorkLedger) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (grid, _) = grid_laplacian(32, 32).unwrap();
    let mut cases: Vec<(SymGraph, ParthConfig)> = vec![(
        build_dual(&grid).unwrap(),
        ParthConfig {
            max_level: MaxLevel::Fixed(4),
            ..Default::default()
        },
    )];
    for t in 0..20 {
        let n = rng.random_range(10..=200);
        cases.push((
            random_banded_graph(&mut rng, n, 5, 3.0),
            ParthConfig {
                max_level: MaxLevel::Fixed(t % 5),
                min_split: 3,
                ..Default::default()
            },
        ));
    }
    for (k, (g, config)) in cases.into_iter().enumerate() {
        let mut parth = Parth::new(config);
        parth.compute_graph(g.clone(), None).unwrap();
        // replay after a real change as well as after the first call
        let (g2, map) = random_delta(&mut rng, &g, false);
        let changed = parth.compute_graph(g2.clone(), Some(&map)).unwrap();
        let again = parth.compute_graph(g2.clone(), None).unwrap();
        work.record("fixed point", &parth, &again);
        if again.reuse_ratio() != 1.0
            || again.assembly.recomputed_tree_nodes != 0
            || again.permutation() != changed.permutation()
        {
            return verdict(
                false,
                format!(
                    "case {k}: reuse {}, recomputed {}",
                    again.reuse_ratio(),
                    again.assembly.recomputed_tree_nodes
                ),
            );
        }
    }
    verdict(true, "21 sequences replayed unchanged: reuse 1.0, 0 recomputed, identical permutation")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Change {
    Contacts,
    Remesh,
}

struct GridRun {
    reuse: f64,
    fill_dev: f64,
}

fn grid_config() -> ParthConfig {
    ParthConfig {
        max_level: MaxLevel::Auto,
        aggressive: Some(SUITE_THETA),
        ..Default::default()
    }
}

fn grid_run(seed: u64, change: Change, config: &ParthConfig, work: &mut WorkLedger) -> GridRun {
    let (p, _) = grid_laplacian(GRID, GRID).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = rng.random_range(0..p.n_rows());
    let mut parth = Parth::new(config.clone());
    parth.compute(&p, None).unwrap();
    let (q, map): (SparsityPattern, Option<NodeMap>) = match change {
        Change::Contacts => (inject_contacts(&p, center, BALL_RADIUS, CONTACTS, seed).unwrap(), None),
        Change::Remesh => {
            let (q, m) = patch_remesh(&p, center, BALL_RADIUS, 1.0, seed).unwrap();
            (q, Some(m))
        }
    };
    let out = parth.compute(&q, map.as_ref()).unwrap();
    work.record("grid", &parth, &out);
    let full = full_recompute(config, &q).unwrap();
    GridRun {
        reuse: out.reuse_ratio(),
        fill_dev: fill_deviation(out.permutation(), full.permutation(), &q).unwrap(),
    }
}

fn grid_suite(work: &mut WorkLedger) -> Vec<(Change, Vec<GridRun>)> {
    let config = grid_config();
    [Change::Contacts, Change::Remesh]
        .into_iter()
        .map(|c| (c, (0..SEEDS).map(|s| grid_run(s, c, &config, work)).collect()))
        .collect()
}

fn criterion_3(suite: &[(Change, Vec<GridRun>)]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (change, runs) in suite {
        let r: Vec<f64> = runs.iter().map(|x| x.reuse).collect();
        let med = median(&r).unwrap();
        let min = r.iter().copied().fold(f64::INFINITY, f64::min);
        pass &= med >= 0.85 && min >= 0.70;
        parts.push(format!("{change:?}: median {med:.3}, min {min:.3}"));
    }
    verdict(pass, format!("{} (need median >= 0.85, min >= 0.70)", parts.join("; ")))
}

fn criterion_4(suite: &[(Change, Vec<GridRun>)]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (change, runs) in suite {
        let d: Vec<f64> = runs.iter().map(|x| x.fill_dev).collect();
        let abs: Vec<f64> = d.iter().map(|x| x.abs()).collect();
        let med = median(&d).unwrap();
        let p90 = quantile(&abs, 0.9).unwrap();
        pass &= med.abs() <= 0.05 && p90 <= 0.10;
        parts.push(format!("{change:?}: median {med:+.4}, p90 |dev| {p90:.4}"));
    }
    verdict(pass, format!("{} (need |median| <= 0.05, p90 <= 0.10)", parts.join("; ")))
}

fn criterion_5() -> Verdict {
    let g1 = SymGraph::from_edges(
        9,
        [(0, 1), (1, 4), (0, 5), (1, 7), (5, 6), (6, 7), (2, 3), (2, 8), (3, 4), (4, 8), (1, 2)],
    )
    .unwrap();
    let mut e2: Vec<_> = g1.edges().filter(|&e| e != (2, 8)).collect();
    e2.extend([(0, 6), (3, 8)]);
    let g2 = SymGraph::from_edges(9, e2).unwrap();
    let sets = vec![vec![0, 1, 4], vec![6], vec![2], vec![5], vec![7], vec![3], vec![8]];
    let mut tree = HgdTree::from_node_sets(2, sets, 9).unwrap();
    if let Err(e) = tree.check_separators(&g1) {
        return verdict(false, format!("reconstructed tree invalid for G1: {e}"));
    }
    let sep = LevelSetSeparator::default();
    let dirty = synchronize(&mut tree, &g1, &g2, &NodeMap::identity(9), Decomposer::new(&sep, 0), None).unwrap();
    let changed: Vec<usize> = dirty.changed().collect();
    verdict(
        changed == [2, 5, 6] && tree.check_separators(&g2).is_ok(),
        format!("changed tree nodes {changed:?} (expected [2, 5, 6])"),
    )
}

fn criterion_6() -> Verdict {
    let brute = brute_force_min_nnz_l(&arrowhead(4));
    let mut bad = Vec::new();
    for n in 4..=64 {
        let p = arrowhead(n);
        let g = build_dual(&p).unwrap();
        let md = symbolic_analyze(&p, &MinDegree.order(&g, 0)).unwrap().nnz_l;
        let nat = symbolic_analyze(&p, &Permutation::identity(n)).unwrap().nnz_l;
        if md != 2 * n - 1 || nat != n * (n + 1) / 2 {
            bad.push(n);
        }
    }
    verdict(
        bad.is_empty() && brute == 7,
        format!("n = 4..64: mindeg 2n-1, natural n(n+1)/2, mismatches {bad:?}; n=4 brute-force optimum {brute}"),
    )
}

fn criterion_7() -> Verdict {
    let (p, values) = grid_laplacian(16, 16).unwrap();
    let mut parth = Parth::new(ParthConfig {
        max_level: MaxLevel::Fixed(3),
        ..Default::default()
    });
    let out = parth.compute(&p, None).unwrap();
    let b: Vec<f64> = (0..p.n_rows()).map(|i| ((i * 7919) % 17) as f64 - 8.0).collect();
    let rep = numeric_cholesky_solve(&p, &values, out.permutation(), &b).unwrap();
    let x_dense = dense_solve(&p, &values, &b);
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = rep.x.iter().zip(&x_dense).map(|(a, b)| a - b).collect();
    let rel = norm(&diff) / norm(&x_dense);
    verdict(
        rep.residual <= 1e-10 && rel <= 1e-10,
        format!("residual {:.2e}, distance to dense solution {rel:.2e} (need <= 1e-10)", rep.residual),
    )
}

fn criterion_8(work: &mut WorkLedger) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let sep = LevelSetSeparator::default();
    let mut violated_total = 0;
    for trial in 0..200u64 {
        let n = rng.random_range(2..=200);
        let deg = rng.random_range(1.0..4.0);
        let g = random_banded_graph(&mut rng, n, 4, deg);
        let mut parth = Parth::new(ParthConfig {
            max_level: MaxLevel::Fixed(rng.random_range(1..=5)),
            min_split: 3,
            seed: trial,
            ..Default::default()
        });
        parth.compute_graph(g.clone(), None).unwrap();
        let mut tree = parth.tree().unwrap().clone();
        let mut edges: Vec<_> = g.edges().collect();
        for _ in 0..rng.random_range(1..=5) {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            let (a, b) = (tree.owner(u), tree.owner(v));
            if u != v && !is_ancestor_or_self(a, b) && !is_ancestor_or_self(b, a) {
                edges.push((u, v));
            }
        }
        let g2 = SymGraph::from_edges(n, edges).unwrap();
        let violated: Vec<usize> = tree.violated_separators(&g2).into_iter().map(|(s, _)| s).collect();
        violated_total += violated.len();
        let dirty =
            synchronize(&mut tree, &g, &g2, &NodeMap::identity(n), Decomposer::new(&sep, trial).with_min_split(3), None)
                .unwrap();
        if let Some(s) = violated.iter().find(|&&s| dirty.c_b[s]) {
            return verdict(false, format!("trial {trial}: violated separator {s} not marked"));
        }
        let out = parth.compute_graph(g2, None).unwrap();
        work.record("dirty set", &parth, &out);
    }
    verdict(true, format!("200 trials, {violated_total} violated separators, all marked changed"))
}

fn criterion_9(work: &mut WorkLedger) -> Verdict {
    let (p, _) = grid_laplacian(GRID, GRID).unwrap();
    let g = build_dual(&p).unwrap();
    let run = |aggressive: Option<f64>, work: &mut WorkLedger| {
        let mut parth = Parth::new(ParthConfig {
            aggressive,
            ..Default::default()
        });
        parth.compute_graph(g.clone(), None).unwrap();
        let tree = parth.tree().unwrap();
        // one node from a leaf under each child of the root
        let leaf_node = |child: usize| {
            (0..g.n_nodes())
                .find(|&u| {
                    let t = tree.owner(u);
                    t != child && is_ancestor_or_self(child, t) && tree.node(t).nodes.len() > 1
                })
                .unwrap()
        };
        let (u, v) = (leaf_node(1), leaf_node(2));
        let mut edges: Vec<_> = g.edges().collect();
        edges.push((u, v));
        let g2 = SymGraph::from_edges(g.n_nodes(), edges).unwrap();
        let out = parth.compute_graph(g2.clone(), None).unwrap();
        work.record("aggressive", &parth, &out);
        let sound = parth.tree().unwrap().check_separators(&g2).is_ok();
        (out.reuse_ratio(), sound)
    };
    let (on, on_ok) = run(Some(DEFAULT_AGGRESSIVE_THETA), work);
    let (off, off_ok) = run(None, work);
    verdict(
        on >= 0.90 && on_ok && off <= 0.05 && off_ok,
        format!("aggressive on: reuse {on:.3}; off: reuse {off:.3} (need >= 0.90 and ~0); separators hold: {}", on_ok && off_ok),
    )
}

fn main() {
    let mut work = WorkLedger::default();
    let mut failed = 0;
    let mut report = |id: usize, name: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Verdict| {
        let t = Instant::now();
        let v = f();
        let el = t.elapsed();
        let in_time = limit.is_none_or(|l| el <= l);
        let pass = v.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget = limit.map(|l| format!(" / {}s", l.as_secs())).unwrap_or_default();
        println!(
            "[{}] {id:>2}. {name}: {} ({:.2}s{budget})",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            el.as_secs_f64()
        );
    };

    report(1, "correctness oracle", Some(Duration::from_secs(60)), &mut || criterion_1(&mut work));
    report(2, "fixed-point reuse", None, &mut || criterion_2(&mut work));
    let t = Instant::now();
    let suite = grid_suite(&mut work);
    let suite_time = t.elapsed();
    report(3, "locality and reuse", Some(Duration::from_secs(120)), &mut || {
        let mut v = criterion_3(&suite);
        v.detail.push_str(&format!(", suite {:.2}s", suite_time.as_secs_f64()));
        v.pass &= suite_time <= Duration::from_secs(120);
        v
    });
    report(4, "fill quality", Some(Duration::from_secs(300)), &mut || criterion_4(&suite));
    report(5, "worked example", None, &mut criterion_5);
    report(6, "arrowhead ordering quality", None, &mut criterion_6);
    report(7, "numeric solve", None, &mut criterion_7);
    report(8, "dirty-set completeness", None, &mut || criterion_8(&mut work));
    report(9, "aggressive reuse", Some(Duration::from_secs(30)), &mut || criterion_9(&mut work));
    report(10, "work proportionality", None, &mut || {
        verdict(
            work.violations.is_empty(),
            match work.violations.first() {
                None => format!("{} steps, recomputed nodes within dirty sets every time", work.steps),
                Some(v) => format!("{} violations, first: {v}", work.violations.len()),
            },
        )
    });

    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
