//! Accumulate contacts step after step and watch the fill deviation against a
//! full rebuild. The monitor only recommends a reset; acting on it is up to
//! the caller.

use parth::metrics::{DegradationMonitor, MonitorStatus};
use parth::symbolic::fill_deviation;
use parth::synthetic::{grid_laplacian, inject_contacts};
use parth::{full_recompute, Parth, ParthConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn main() {
    let (mut pattern, _) = grid_laplacian(32, 32).unwrap();
    let config = ParthConfig {
        aggressive: Some(0.1),
        ..Default::default()
    };
    let mut parth = Parth::new(config.clone());
    parth.compute(&pattern, None).unwrap();
    let mut monitor = DegradationMonitor::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for step in 1..=12 {
        let center = rng.random_range(0..pattern.n_rows());
        pattern = inject_contacts(&pattern, center, 3, 12, step).unwrap();
        let out = parth.compute(&pattern, None).unwrap();
        let full = full_recompute(&config, &pattern).unwrap();
        let dev = fill_deviation(out.permutation(), full.permutation(), &pattern).unwrap();
        let status = monitor.push(dev);
        println!("step {step:>2}: reuse {:.3}, fill dev {dev:+.4}, {status:?}", out.reuse_ratio());
        if status == MonitorStatus::ResetRecommended {
            parth.reset();
            monitor.clear();
            println!("         reset");
        }
    }
}
