//! Writes a synthetic remeshing sequence to disk, then replays its manifest
//! and prints the metrics CSV.

use parth::driver::{generate_to_dir, run_manifest, RunOptions};
use parth::engine::MaxLevel;
use parth::io::read_manifest;
use parth::synthetic::{SequenceKind, SequenceSpec};

pub fn main() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SequenceSpec {
        kind: SequenceKind::Remesh,
        nx: 24,
        ny: 24,
        steps: 4,
        radius: 2,
        densify: 1.5,
        seed: 3,
        ..Default::default()
    };
    let manifest = generate_to_dir(&spec, dir.path()).unwrap();
    for step in read_manifest(&manifest).unwrap() {
        println!("{} (map: {})", step.label, step.map_path.is_some());
    }
    let mut opts = RunOptions::default();
    opts.config.max_level = MaxLevel::Fixed(3);
    let mut csv = Vec::new();
    run_manifest(&manifest, &opts, &mut csv).unwrap();
    print!("{}", String::from_utf8(csv).unwrap());
}
