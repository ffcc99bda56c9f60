//! Balanced vertex separators.
//!
//! The default [`LevelSetSeparator`] roots a breadth-first level structure at
//! a pseudo-peripheral node and cuts at one level boundary. Disconnected
//! graphs are first split along whole components.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::graph::SymGraph;

/// Three-way split of a graph's nodes. All sets are sorted local indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeparatorResult {
    pub sep: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl SeparatorResult {
    /// Checks the partition and that no edge joins `left` to `right`.
    pub fn verify(&self, g: &SymGraph) -> Result<(), String> {
        let n = g.n_nodes();
        let mut side = vec![u8::MAX; n];
        for (tag, set) in [(0u8, &self.sep), (1, &self.left), (2, &self.right)] {
            for &u in set {
                if u >= n {
                    return Err(format!("node {u} out of range"));
                }
                if side[u] != u8::MAX {
                    return Err(format!("node {u} assigned twice"));
                }
                side[u] = tag;
            }
        }
        if let Some(u) = side.iter().position(|&s| s == u8::MAX) {
            return Err(format!("node {u} unassigned"));
        }
        for (u, v) in g.edges() {
            if side[u] + side[v] == 3 {
                return Err(format!("edge ({u}, {v}) crosses the separator"));
            }
        }
        Ok(())
    }

    pub fn is_balanced(&self, beta: f64) -> bool {
        let (l, r) = (self.left.len(), self.right.len());
        l.max(r) as f64 <= beta * (l + r) as f64
    }
}

/// Strategy that splits a graph into separator, left and right.
pub trait SeparatorEngine: Send + Sync {
    fn name(&self) -> &str;

    /// Must be deterministic in `(g, seed)` and return a valid split.
    fn separate(&self, g: &SymGraph, seed: u64) -> SeparatorResult;
}

/// Level-structure bisection with greedy separator shrinking.
#[derive(Debug, Clone, Copy)]
pub struct LevelSetSeparator {
    /// Largest allowed share of the bigger side, in `(0.5, 1]`.
    pub balance: f64,
}

impl Default for LevelSetSeparator {
    fn default() -> Self {
        LevelSetSeparator { balance: 0.7 }
    }
}

const NONE: usize = usize::MAX;

struct Bfs {
    dist: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Bfs {
            dist: vec![NONE; n],
            queue: VecDeque::new(),
        }
    }

    /// Level sets of the component of `root`; `comp` lists its nodes.
    fn levels(&mut self, g: &SymGraph, comp: &[usize], root: usize) -> Vec<Vec<usize>> {
        for &u in comp {
            self.dist[u] = NONE;
        }
        let mut levels: Vec<Vec<usize>> = Vec::new();
        self.dist[root] = 0;
        self.queue.push_back(root);
        while let Some(u) = self.queue.pop_front() {
            let d = self.dist[u];
            if levels.len() <= d {
                levels.push(Vec::new());
            }
            levels[d].push(u);
            for &v in g.neighbors(u) {
                if self.dist[v] == NONE {
                    self.dist[v] = d + 1;
                    self.queue.push_back(v);
                }
            }
        }
        for l in levels.iter_mut() {
            l.sort_unstable();
        }
        levels
    }
}

fn components(g: &SymGraph) -> Vec<Vec<usize>> {
    let n = g.n_nodes();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(u);
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

impl LevelSetSeparator {
    fn farthest(g: &SymGraph, levels: &[Vec<usize>]) -> usize {
        let last = levels.last().expect("non-empty component");
        *last
            .iter()
            .min_by_key(|&&u| (g.degree(u), u))
            .expect("non-empty level")
    }

    /// Splits one connected component of at least three nodes. Returns
    /// `(sep, before, after)`.
    fn split_component(
        &self,
        g: &SymGraph,
        comp: &[usize],
        seed: u64,
        bfs: &mut Bfs,
    ) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let start = comp[(seed % comp.len() as u64) as usize];
        let mut root = start;
        for _ in 0..2 {
            let lv = bfs.levels(g, comp, root);
            root = Self::farthest(g, &lv);
        }
        let levels = bfs.levels(g, comp, root);
        let h = levels.len();
        let total = comp.len();

        // candidate boundary t: separator = nodes of level t touching level t+1
        let mut best: Option<((usize, usize), usize, Vec<usize>)> = None;
        let mut prefix = 0;
        for (t, level) in levels.iter().enumerate().take(h.saturating_sub(1)) {
            let sep: Vec<usize> = level
                .iter()
                .copied()
                .filter(|&u| g.neighbors(u).iter().any(|&v| bfs.dist[v] == t + 1))
                .collect();
            prefix += level.len();
            let before = prefix - sep.len();
            let after = total - prefix;
            let key = (before.abs_diff(after), sep.len());
            if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                best = Some((key, t, sep));
            }
        }
        let Some((_, t, sep)) = best else {
            // single level: one node
            return (Vec::new(), comp.to_vec(), Vec::new());
        };

        // 0 = separator, 1 = before, 2 = after
        let mut side = vec![0u8; g.n_nodes()];
        for &u in comp {
            side[u] = if bfs.dist[u] > t { 2 } else { 1 };
        }
        for &u in &sep {
            side[u] = 0;
        }
        let mut sizes = [0usize; 3];
        for &u in comp {
            sizes[side[u] as usize] += 1;
        }

        let mut sep = sep;
        loop {
            let mut changed = false;
            sep.retain(|&s| {
                let (mut a, mut b) = (false, false);
                for &v in g.neighbors(s) {
                    match side[v] {
                        1 => a = true,
                        2 => b = true,
                        _ => {}
                    }
                }
                let target = match (a, b) {
                    (true, true) => return true,
                    (true, false) => 1,
                    (false, true) => 2,
                    (false, false) => {
                        if sizes[1] <= sizes[2] {
                            1
                        } else {
                            2
                        }
                    }
                };
                side[s] = target;
                sizes[target as usize] += 1;
                changed = true;
                false
            });
            if !changed {
                break;
            }
        }
        let mut before = Vec::new();
        let mut after = Vec::new();
        for &u in comp {
            match side[u] {
                1 => before.push(u),
                2 => after.push(u),
                _ => {}
            }
        }
        (sep, before, after)
    }
}

impl SeparatorEngine for LevelSetSeparator {
    fn name(&self) -> &str {
        "level_set"
    }

    fn separate(&self, g: &SymGraph, seed: u64) -> SeparatorResult {
        let n = g.n_nodes();
        if n <= 2 {
            return match n {
                0 => SeparatorResult::default(),
                1 => SeparatorResult {
                    left: vec![0],
                    ..Default::default()
                },
                _ if g.has_edge(0, 1) => SeparatorResult {
                    left: vec![0, 1],
                    ..Default::default()
                },
                _ => SeparatorResult {
                    left: vec![0],
                    right: vec![1],
                    ..Default::default()
                },
            };
        }

        let mut comps = components(g);
        // largest first, ties by lowest node
        comps.sort_by_key(|c| (std::cmp::Reverse(c.len()), c[0]));
        let mut sep = Vec::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut rest = &comps[..];
        if comps[0].len() as f64 > self.balance * n as f64 && comps[0].len() >= 3 {
            let mut bfs = Bfs::new(n);
            let (s, a, b) = self.split_component(g, &comps[0], seed, &mut bfs);
            sep = s;
            left = a;
            right = b;
            rest = &comps[1..];
        }
        for c in rest {
            if left.len() <= right.len() {
                left.extend_from_slice(c);
            } else {
                right.extend_from_slice(c);
            }
        }
        sep.sort_unstable();
        left.sort_unstable();
        right.sort_unstable();
        SeparatorResult { sep, left, right }
    }
}

/// Selectable separator strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeparatorKind {
    #[default]
    LevelSet,
}

impl SeparatorKind {
    pub fn engine(self) -> Box<dyn SeparatorEngine> {
        match self {
            SeparatorKind::LevelSet => Box::new(LevelSetSeparator::default()),
        }
    }
}

impl FromStr for SeparatorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "level_set" | "level-set" => Ok(SeparatorKind::LevelSet),
            other => Err(format!("unknown separator engine '{other}' (expected level_set)")),
        }
    }
}

impl fmt::Display for SeparatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("level_set")
    }
}

/// Runs `engine` on `g`; in debug builds the result is checked exhaustively.
pub fn compute_min_separator(g: &SymGraph, engine: &dyn SeparatorEngine, seed: u64) -> SeparatorResult {
    let r = engine.separate(g, seed);
    debug_assert_eq!(r.verify(g), Ok(()), "engine {} produced an invalid split", engine.name());
    r
}
