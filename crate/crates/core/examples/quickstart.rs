//! Order a grid Laplacian, then re-order it after a few contact edges appear.
//!
//! Run with `cargo run --example quickstart`.

use parth::synthetic::{grid_laplacian, inject_contacts};
use parth::{Parth, ParthConfig};

pub fn main() {
    let (grid, _values) = grid_laplacian(48, 48).expect("grid");
    let mut parth = Parth::new(ParthConfig::default());

    let first = parth.compute(&grid, None).expect("first call");
    println!(
        "first call: {} rows, {} tree nodes ordered",
        first.permutation().len(),
        first.assembly.recomputed_tree_nodes
    );

    let contact = inject_contacts(&grid, 1000, 3, 8, 7).expect("contacts");
    let step = parth.compute(&contact, None).expect("second call");
    println!(
        "after 8 contacts: reuse {:.1}%, {} of {} graph nodes re-ordered",
        100.0 * step.reuse_ratio(),
        step.assembly.recomputed_graph_nodes,
        step.n_nodes
    );

    let again = parth.compute(&contact, None).expect("replay");
    assert_eq!(again.permutation(), step.permutation());
    println!("unchanged replay: reuse {:.1}%", 100.0 * again.reuse_ratio());
}
