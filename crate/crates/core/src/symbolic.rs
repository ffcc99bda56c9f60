//! Symbolic and numeric Cholesky used to judge orderings.
//!
//! Column counts are exact: each row of the permuted pattern walks its row
//! subtree in the elimination tree. The numeric factorization is a plain
//! up-looking sparse Cholesky with no supernodes.

use crate::error::{Error, Result};
use crate::graph::SparsityPattern;
use crate::ordering::Permutation;

/// `parent[j]` is the elimination-tree parent of column `j`, `None` for roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTree {
    pub parent: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorStats {
    /// Nonzeros of `L` including the diagonal.
    pub nnz_l: usize,
    /// Sum of squared column counts.
    pub flop_estimate: u64,
}

fn check_perm(pattern: &SparsityPattern, perm: &Permutation) -> Result<()> {
    if perm.len() != pattern.n_rows() {
        return Err(Error::InvalidPermutation(format!(
            "length {} does not match {} rows",
            perm.len(),
            pattern.n_rows()
        )));
    }
    Ok(())
}

/// Elimination tree and strictly-lower column counts of an (already
/// permuted) symmetric pattern.
fn etree_and_counts(c: &SparsityPattern) -> (EliminationTree, Vec<usize>) {
    let n = c.n_rows();
    let mut parent = vec![None; n];
    let mut flag = vec![usize::MAX; n];
    let mut below = vec![0usize; n];
    for k in 0..n {
        flag[k] = k;
        for &j in c.row(k) {
            if j >= k {
                break;
            }
            let mut i = j;
            while flag[i] != k {
                if parent[i].is_none() {
                    parent[i] = Some(k);
                }
                below[i] += 1;
                flag[i] = k;
                i = parent[i].expect("set above");
            }
        }
    }
    (EliminationTree { parent }, below)
}

pub fn elimination_tree(pattern: &SparsityPattern, perm: &Permutation) -> Result<EliminationTree> {
    check_perm(pattern, perm)?;
    Ok(etree_and_counts(&pattern.permuted(perm)?).0)
}

/// Exact size of the Cholesky factor of `P A P^T`.
pub fn symbolic_analyze(pattern: &SparsityPattern, perm: &Permutation) -> Result<FactorStats> {
    check_perm(pattern, perm)?;
    let (_, below) = etree_and_counts(&pattern.permuted(perm)?);
    let nnz_l = pattern.n_rows() + below.iter().sum::<usize>();
    let flop_estimate = below.iter().map(|&b| ((b + 1) as u64).pow(2)).sum();
    Ok(FactorStats {
        nnz_l,
        flop_estimate,
    })
}

/// `(nnz_l(parth) - nnz_l(baseline)) / nnz_l(baseline)`.
pub fn fill_deviation(
    p_parth: &Permutation,
    p_baseline: &Permutation,
    pattern: &SparsityPattern,
) -> Result<f64> {
    let a = symbolic_analyze(pattern, p_parth)?.nnz_l as f64;
    let b = symbolic_analyze(pattern, p_baseline)?.nnz_l as f64;
    Ok((a - b) / b)
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x: Vec<f64>,
    /// `||A x - b||_2 / ||b||_2`.
    pub residual: f64,
    /// Nonzeros of the computed factor.
    pub nnz_l: usize,
}

/// Factorizes `P A P^T = L L^T` and solves `A x = b`.
///
/// `values` is aligned with `pattern.col_indices()` and must describe a
/// symmetric matrix.
pub fn numeric_cholesky_solve(
    pattern: &SparsityPattern,
    values: &[f64],
    perm: &Permutation,
    b: &[f64],
) -> Result<SolveReport> {
    check_perm(pattern, perm)?;
    let n = pattern.n_rows();
    if values.len() != pattern.nnz() {
        return Err(Error::MalformedPattern(format!(
            "{} values for {} nonzeros",
            values.len(),
            pattern.nnz()
        )));
    }
    if b.len() != n {
        return Err(Error::MalformedPattern(format!(
            "right-hand side has length {}, expected {n}",
            b.len()
        )));
    }
    let inv = perm.inverse();
    let c = pattern.permuted(perm)?;
    // permuted values, aligned with c
    let mut c_vals = vec![0.0; c.nnz()];
    for r in 0..n {
        for (k, &col) in pattern.row(r).iter().enumerate() {
            let pos = c
                .position(inv[r], inv[col])
                .expect("permuted pattern holds every entry");
            c_vals[pos] = values[pattern.row_starts()[r] + k];
        }
    }
    let (etree, below) = etree_and_counts(&c);
    let parent = etree.parent;

    // column j: diagonal first, then rows in increasing order
    let mut cols: Vec<Vec<(usize, f64)>> = below.iter().map(|&b| Vec::with_capacity(b + 1)).collect();
    let mut x = vec![0.0; n];
    let mut flag = vec![usize::MAX; n];
    let mut paths: Vec<Vec<usize>> = Vec::new();
    for k in 0..n {
        // row pattern of L(k, :) as a topologically ordered reach
        paths.clear();
        flag[k] = k;
        let row = c.row(k);
        let row_vals = &c_vals[c.row_starts()[k]..c.row_starts()[k + 1]];
        let mut d = 0.0;
        for (&j, &v) in row.iter().zip(row_vals) {
            if j > k {
                break;
            }
            x[j] = v;
            if j == k {
                d = v;
                continue;
            }
            let mut path = Vec::new();
            let mut i = j;
            while flag[i] != k {
                path.push(i);
                flag[i] = k;
                i = parent[i].expect("reach stays below k");
            }
            paths.push(path);
        }
        for path in paths.iter().rev() {
            for &i in path {
                let lii = cols[i][0].1;
                let lki = x[i] / lii;
                x[i] = 0.0;
                for &(r, lri) in &cols[i][1..] {
                    x[r] -= lri * lki;
                }
                d -= lki * lki;
                cols[i].push((k, lki));
            }
        }
        x[k] = 0.0;
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { column: k, pivot: d });
        }
        cols[k].insert(0, (k, d.sqrt()));
    }
    let nnz_l = cols.iter().map(Vec::len).sum();

    // forward: L y = P b
    let mut y: Vec<f64> = (0..n).map(|i| b[perm.as_slice()[i]]).collect();
    for j in 0..n {
        y[j] /= cols[j][0].1;
        let yj = y[j];
        for &(r, l) in &cols[j][1..] {
            y[r] -= l * yj;
        }
    }
    // backward: L^T z = y
    for j in (0..n).rev() {
        let mut s = y[j];
        for &(r, l) in &cols[j][1..] {
            s -= l * y[r];
        }
        y[j] = s / cols[j][0].1;
    }
    let mut sol = vec![0.0; n];
    for (new, &old) in perm.as_slice().iter().enumerate() {
        sol[old] = y[new];
    }

    let mut r2 = 0.0;
    for (row, &rhs) in b.iter().enumerate().take(n) {
        let s = pattern.row_starts()[row];
        let ax: f64 = pattern
            .row(row)
            .iter()
            .enumerate()
            .map(|(k, &col)| values[s + k] * sol[col])
            .sum();
        r2 += (ax - rhs).powi(2);
    }
    let b2: f64 = b.iter().map(|v| v * v).sum();
    let residual = if b2 > 0.0 { (r2 / b2).sqrt() } else { r2.sqrt() };
    Ok(SolveReport {
        x: sol,
        residual,
        nnz_l,
    })
}
