//! Solve a grid Laplacian system with the produced permutation.

use parth::symbolic::numeric_cholesky_solve;
use parth::synthetic::grid_laplacian;
use parth::{Parth, ParthConfig};

pub fn main() {
    let (p, values) = grid_laplacian(16, 16).unwrap();
    let mut parth = Parth::new(ParthConfig::default());
    let out = parth.compute(&p, None).unwrap();
    let b: Vec<f64> = (0..p.n_rows()).map(|i| (i % 5) as f64 - 2.0).collect();
    let rep = numeric_cholesky_solve(&p, &values, out.permutation(), &b).unwrap();
    println!("nnz(L) {}, relative residual {:.2e}", rep.nnz_l, rep.residual);
}
