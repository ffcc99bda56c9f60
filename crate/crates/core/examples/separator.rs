//! Level-set vertex separator of a small grid.

use parth::graph::build_dual;
use parth::separator::{compute_min_separator, LevelSetSeparator};
use parth::synthetic::grid_laplacian;

pub fn main() {
    let (p, _) = grid_laplacian(9, 7).unwrap();
    let g = build_dual(&p).unwrap();
    let engine = LevelSetSeparator::default();
    let s = compute_min_separator(&g, &engine, 0);
    s.verify(&g).expect("no edge joins the two sides");
    println!(
        "separator {} nodes, sides {} / {}, balanced at 0.7: {}",
        s.sep.len(),
        s.left.len(),
        s.right.len(),
        s.is_balanced(0.7)
    );
    for y in 0..7 {
        let row: String = (0..9)
            .map(|x| {
                let u = y * 9 + x;
                if s.sep.contains(&u) {
                    'S'
                } else if s.left.contains(&u) {
                    'l'
                } else {
                    'r'
                }
            })
            .collect();
        println!("  {row}");
    }
}
