//! Deterministic generators of dynamic-sparsity sequences.
//!
//! Two regimes are covered: contact edges appearing inside a small region of
//! a grid ([`inject_contacts`]) and a patch of the mesh being replaced by a
//! denser or coarser one ([`patch_remesh`]). Both are local by construction
//! and reproducible for a given seed.

use std::collections::VecDeque;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{build_dual, edge, Edge, NodeMap, SparsityPattern, SymGraph};

/// Diagonal shift added to the grid Laplacian.
pub const GRID_SHIFT: f64 = 1e-3;

/// 5-point Laplacian on an `nx` by `ny` grid, row-major node numbering, with
/// values aligned to the pattern's column indices.
pub fn grid_laplacian(nx: usize, ny: usize) -> Result<(SparsityPattern, Vec<f64>)> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidArgument(format!("grid {nx}x{ny} must be at least 2x2")));
    }
    let mut edges = Vec::with_capacity(2 * nx * ny);
    for y in 0..ny {
        for x in 0..nx {
            let u = y * nx + x;
            if x + 1 < nx {
                edges.push((u, u + 1));
            }
            if y + 1 < ny {
                edges.push((u, u + nx));
            }
        }
    }
    let pattern = SparsityPattern::symmetric_with_diagonal(nx * ny, edges)?;
    let values = pattern
        .entries()
        .map(|(r, c)| if r == c { 4.0 + GRID_SHIFT } else { -1.0 })
        .collect();
    Ok((pattern, values))
}

/// Diagonally dominant values for any symmetric pattern: `-1` off the
/// diagonal and `degree + shift` on it. Missing diagonal entries stay missing.
pub fn spd_values(pattern: &SparsityPattern, shift: f64) -> Vec<f64> {
    (0..pattern.n_rows())
        .flat_map(|r| {
            let row = pattern.row(r);
            let deg = row.iter().filter(|&&c| c != r).count() as f64;
            row.iter().map(move |&c| if c == r { deg + shift } else { -1.0 })
        })
        .collect()
}

/// Nodes within `radius` hops of `center`, sorted.
pub fn hop_ball(g: &SymGraph, center: usize, radius: usize) -> Result<Vec<usize>> {
    let n = g.n_nodes();
    if center >= n {
        return Err(Error::IndexOutOfBounds { index: center, bound: n });
    }
    let dist = hop_distances(g, center, Some(radius));
    Ok((0..n).filter(|&u| dist[u].is_some()).collect())
}

/// BFS hop counts from `source`, optionally cut off after `limit` hops.
pub fn hop_distances(g: &SymGraph, source: usize, limit: Option<usize>) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n_nodes()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap_or(0);
        if limit.is_some_and(|l| d >= l) {
            continue;
        }
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Adds `k` random symmetric nonzeros between currently unconnected pairs
/// inside the `radius`-hop ball around `center`. When the ball has fewer
/// than `k` such pairs, all of them are added.
pub fn inject_contacts(
    pattern: &SparsityPattern,
    center: usize,
    radius: usize,
    k: usize,
    seed: u64,
) -> Result<SparsityPattern> {
    let g = build_dual(pattern)?;
    let ball = hop_ball(&g, center, radius)?;
    if ball.len() < 2 {
        return Err(Error::BallTooSmall {
            center,
            size: ball.len(),
        });
    }
    if k == 0 {
        return Ok(pattern.clone());
    }
    let mut candidates: Vec<Edge> = Vec::new();
    for (i, &u) in ball.iter().enumerate() {
        for &v in &ball[i + 1..] {
            if !pattern.contains(u, v) {
                candidates.push((u, v));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked: Vec<Edge> = candidates.choose_multiple(&mut rng, k).copied().collect();
    let entries = pattern
        .entries()
        .chain(picked.iter().flat_map(|&(u, v)| [(u, v), (v, u)]));
    SparsityPattern::from_entries(pattern.n_rows(), entries)
}

/// Replaces the `radius`-hop ball around `center` by `ceil(densify * |ball|)`
/// new nodes. Surviving nodes keep their relative order and come first; new
/// nodes are appended. The new nodes inherit the ball's connectivity (so the
/// patch stays connected and attached to the ball's boundary), with random
/// choices of which new node carries each boundary link. The result always
/// has a full diagonal.
pub fn patch_remesh(
    pattern: &SparsityPattern,
    center: usize,
    radius: usize,
    densify: f64,
    seed: u64,
) -> Result<(SparsityPattern, NodeMap)> {
    if !(densify.is_finite() && densify > 0.0) {
        return Err(Error::InvalidArgument(format!("densify must be positive, got {densify}")));
    }
    let g = build_dual(pattern)?;
    let n = g.n_nodes();
    let ball = hop_ball(&g, center, radius)?;
    let b = ball.len();
    if b == n {
        return Err(Error::InvalidArgument(format!(
            "ball around {center} covers the whole graph"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut in_ball = vec![usize::MAX; n];
    for (i, &u) in ball.iter().enumerate() {
        in_ball[u] = i;
    }
    let mut old_to_new = vec![usize::MAX; n];
    let mut entries = Vec::with_capacity(n);
    for u in 0..n {
        if in_ball[u] == usize::MAX {
            old_to_new[u] = entries.len();
            entries.push(Some(u));
        }
    }
    let s = entries.len();
    let m = (densify * b as f64).ceil() as usize;
    entries.resize(s + m, None);

    // replacements[i]: new nodes standing in for ball[i]; every list is
    // non-empty and every new node appears exactly once
    let mut labels: Vec<usize> = (s..s + m).collect();
    labels.shuffle(&mut rng);
    let mut replacements: Vec<Vec<usize>> = vec![Vec::new(); b];
    if m >= b {
        for (j, &l) in labels.iter().enumerate() {
            replacements[j % b].push(l);
        }
    } else {
        for (i, r) in replacements.iter_mut().enumerate() {
            r.push(labels[i * m / b]);
        }
    }

    let mut edges: Vec<Edge> = Vec::new();
    for u in 0..n {
        let iu = in_ball[u];
        for &v in g.neighbors(u).iter().filter(|&&v| v > u) {
            let iv = in_ball[v];
            match (iu == usize::MAX, iv == usize::MAX) {
                (true, true) => edges.push((old_to_new[u], old_to_new[v])),
                (true, false) => edges.push((old_to_new[u], *replacements[iv].choose(&mut rng).unwrap_or(&s))),
                (false, true) => edges.push((old_to_new[v], *replacements[iu].choose(&mut rng).unwrap_or(&s))),
                (false, false) => {
                    for &a in &replacements[iu] {
                        for &c in &replacements[iv] {
                            edges.push(edge(a, c));
                        }
                    }
                }
            }
        }
    }
    for r in &replacements {
        for w in r.windows(2) {
            edges.push(edge(w[0], w[1]));
        }
    }
    let pattern = SparsityPattern::symmetric_with_diagonal(s + m, edges.into_iter().filter(|&(a, c)| a != c))?;
    let map = NodeMap::new(entries, n)?;
    Ok((pattern, map))
}

/// Kind of change applied between consecutive steps of a generated sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    /// Contacts accumulate; node count is fixed.
    Contacts,
    /// A patch is remeshed each step; node count may change.
    Remesh,
}

impl std::str::FromStr for SequenceKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "contacts" | "contact" => Ok(SequenceKind::Contacts),
            "remesh" => Ok(SequenceKind::Remesh),
            _ => Err(format!("unknown sequence kind '{s}' (expected contacts or remesh)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSpec {
    pub kind: SequenceKind,
    pub nx: usize,
    pub ny: usize,
    pub steps: usize,
    pub radius: usize,
    /// Contacts per step.
    pub contacts: usize,
    pub densify: f64,
    pub seed: u64,
}

impl Default for SequenceSpec {
    fn default() -> Self {
        SequenceSpec {
            kind: SequenceKind::Contacts,
            nx: 64,
            ny: 64,
            steps: 10,
            radius: 5,
            contacts: 20,
            densify: 1.0,
            seed: 0,
        }
    }
}

/// One generated step; `map` is set when the node set changed.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedStep {
    pub pattern: SparsityPattern,
    pub values: Vec<f64>,
    pub map: Option<NodeMap>,
}

/// Generates a sequence starting from the grid Laplacian. Each later step
/// picks a random center and applies one change of the requested kind.
pub fn generate_sequence(spec: &SequenceSpec) -> Result<Vec<GeneratedStep>> {
    let (mut pattern, values) = grid_laplacian(spec.nx, spec.ny)?;
    let mut out = vec![GeneratedStep {
        pattern: pattern.clone(),
        values,
        map: None,
    }];
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 1..spec.steps {
        let center = rng.random_range(0..pattern.n_rows());
        let step_seed: u64 = rng.random();
        let map = match spec.kind {
            SequenceKind::Contacts => {
                pattern = inject_contacts(&pattern, center, spec.radius, spec.contacts, step_seed)?;
                None
            }
            SequenceKind::Remesh => {
                let (p, m) = patch_remesh(&pattern, center, spec.radius, spec.densify, step_seed)?;
                pattern = p;
                Some(m)
            }
        };
        out.push(GeneratedStep {
            values: spd_values(&pattern, GRID_SHIFT),
            pattern: pattern.clone(),
            map,
        });
    }
    Ok(out)
}
