//! Permutations and the per-sub-graph fill-reducing ordering engines.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::SymGraph;

/// Bijection over `[0, len)` stored as `perm[new_position] = old_index`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    perm: Vec<usize>,
}

impl Permutation {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n {
                return Err(Error::InvalidPermutation(format!("entry {p} out of range {n}")));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation(format!("entry {p} repeated")));
            }
        }
        Ok(Permutation { perm })
    }

    pub(crate) fn new_unchecked(perm: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(perm.clone()).is_ok());
        Permutation { perm }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            perm: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.perm
    }

    /// `inv[old_index] = new_position`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (new, &old) in self.perm.iter().enumerate() {
            inv[old] = new;
        }
        inv
    }
}

/// Fill-reducing ordering of a single sub-graph.
pub trait OrderingEngine: Send + Sync {
    fn name(&self) -> &str;

    /// Must return a bijection over the local indices of `g` and be
    /// deterministic in `(g, seed)`.
    fn order(&self, g: &SymGraph, seed: u64) -> Permutation;
}

/// Keeps the local order as given.
#[derive(Debug, Clone, Copy, Default)]
pub struct NaturalOrdering;

impl OrderingEngine for NaturalOrdering {
    fn name(&self) -> &str {
        "natural"
    }

    fn order(&self, g: &SymGraph, _seed: u64) -> Permutation {
        Permutation::identity(g.n_nodes())
    }
}

/// Exact minimum degree on the quotient graph.
///
/// The next pivot is the variable with the smallest external degree; ties go
/// to the smaller original degree and then to the lower index.
#[derive(Debug, Clone, Copy, Default)]
pub struct MinDegree;

impl OrderingEngine for MinDegree {
    fn name(&self) -> &str {
        "mindeg"
    }

    fn order(&self, g: &SymGraph, _seed: u64) -> Permutation {
        QuotientGraph::new(g).eliminate_all()
    }
}

struct QuotientGraph<'g> {
    g: &'g SymGraph,
    /// Variable-variable adjacency not yet covered by an element.
    vars: Vec<Vec<usize>>,
    /// Elements adjacent to each variable.
    elems: Vec<Vec<usize>>,
    /// Variables of each element (indexed by the eliminated pivot).
    members: Vec<Vec<usize>>,
    eliminated: Vec<bool>,
    absorbed: Vec<bool>,
    degree: Vec<usize>,
    mark: Vec<usize>,
    stamp: usize,
}

impl<'g> QuotientGraph<'g> {
    fn new(g: &'g SymGraph) -> Self {
        let n = g.n_nodes();
        QuotientGraph {
            g,
            vars: (0..n).map(|u| g.neighbors(u).to_vec()).collect(),
            elems: vec![Vec::new(); n],
            members: vec![Vec::new(); n],
            eliminated: vec![false; n],
            absorbed: vec![false; n],
            degree: (0..n).map(|u| g.degree(u)).collect(),
            mark: vec![0; n],
            stamp: 0,
        }
    }

    fn next_stamp(&mut self) -> usize {
        self.stamp += 1;
        self.stamp
    }

    fn eliminate_all(mut self) -> Permutation {
        let n = self.g.n_nodes();
        let mut order = Vec::with_capacity(n);
        // (degree, original degree, index) keyed buckets would be faster; a
        // linear scan is fine for sub-graph sizes in the low thousands.
        for _ in 0..n {
            let p = (0..n)
                .filter(|&v| !self.eliminated[v])
                .min_by_key(|&v| (self.degree[v], self.g.degree(v), v))
                .expect("variables remain");
            self.eliminate(p);
            order.push(p);
        }
        Permutation::new_unchecked(order)
    }

    fn eliminate(&mut self, p: usize) {
        self.eliminated[p] = true;
        let s = self.next_stamp();
        self.mark[p] = s;
        let mut reach = Vec::new();
        for &v in &self.vars[p] {
            if !self.eliminated[v] && self.mark[v] != s {
                self.mark[v] = s;
                reach.push(v);
            }
        }
        let absorbed_now = std::mem::take(&mut self.elems[p]);
        for &e in &absorbed_now {
            for &v in &self.members[e] {
                if !self.eliminated[v] && self.mark[v] != s {
                    self.mark[v] = s;
                    reach.push(v);
                }
            }
            self.absorbed[e] = true;
            self.members[e] = Vec::new();
        }
        reach.sort_unstable();
        self.vars[p] = Vec::new();

        for &i in &reach {
            let absorbed = &self.absorbed;
            self.elems[i].retain(|&e| !absorbed[e]);
            self.elems[i].push(p);
            // variables in the new element are reachable through it
            let mark = &self.mark;
            self.vars[i].retain(|&v| mark[v] != s);
        }
        self.members[p] = reach.clone();
        for &i in &reach {
            self.degree[i] = self.external_degree(i);
        }
    }

    fn external_degree(&mut self, i: usize) -> usize {
        let s = self.next_stamp();
        self.mark[i] = s;
        let mut deg = 0;
        for k in 0..self.vars[i].len() {
            let v = self.vars[i][k];
            if !self.eliminated[v] && self.mark[v] != s {
                self.mark[v] = s;
                deg += 1;
            }
        }
        for k in 0..self.elems[i].len() {
            let e = self.elems[i][k];
            for m in 0..self.members[e].len() {
                let v = self.members[e][m];
                if !self.eliminated[v] && self.mark[v] != s {
                    self.mark[v] = s;
                    deg += 1;
                }
            }
        }
        deg
    }
}

/// Selectable ordering strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderingKind {
    Natural,
    #[default]
    MinDegree,
}

impl OrderingKind {
    pub fn engine(self) -> Box<dyn OrderingEngine> {
        match self {
            OrderingKind::Natural => Box::new(NaturalOrdering),
            OrderingKind::MinDegree => Box::new(MinDegree),
        }
    }
}

impl FromStr for OrderingKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "natural" => Ok(OrderingKind::Natural),
            "mindeg" | "min_degree" | "min-degree" => Ok(OrderingKind::MinDegree),
            other => Err(format!("unknown local ordering '{other}' (expected natural|mindeg)")),
        }
    }
}

impl fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderingKind::Natural => "natural",
            OrderingKind::MinDegree => "mindeg",
        })
    }
}

/// Orders `g` with `engine` and checks the result is a bijection.
pub fn order_subgraph(g: &SymGraph, engine: &dyn OrderingEngine, seed: u64) -> Permutation {
    let p = engine.order(g, seed);
    assert_eq!(p.len(), g.n_nodes(), "engine {} returned wrong length", engine.name());
    p
}
