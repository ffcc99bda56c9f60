//! The incremental ordering engine.
//!
//! [`Parth`] keeps the decomposition tree and the previous graph between
//! calls. The first call builds everything; later calls synchronize the tree
//! with the new pattern and recompute only invalidated local orderings.

use std::time::{Duration, Instant};

use crate::assembler::{assemble, AssembleOptions, AssemblyState};
use crate::error::{Error, Result};
use crate::graph::{compress_by_dim, NodeMap, SparsityPattern, SymGraph};
use crate::hgd::{default_max_level, Decomposer, HgdTree, DEFAULT_MIN_SPLIT, DEFAULT_TARGET_LEAF};
use crate::ordering::{OrderingEngine, OrderingKind, Permutation};
use crate::separator::{SeparatorEngine, SeparatorKind};
use crate::synchronizer::{synchronize, DirtyState};

/// Tree depth selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaxLevel {
    /// Chosen from the first graph via [`default_max_level`].
    #[default]
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for MaxLevel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(MaxLevel::Auto);
        }
        s.parse()
            .map(MaxLevel::Fixed)
            .map_err(|_| format!("invalid max level '{s}' (expected auto or an integer)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParthConfig {
    /// Matrix rows per graph node.
    pub dim: usize,
    pub max_level: MaxLevel,
    pub target_leaf: usize,
    pub min_split: usize,
    pub separator: SeparatorKind,
    pub ordering: OrderingKind,
    /// Aggressive-reuse threshold; `None` disables it.
    pub aggressive: Option<f64>,
    pub seed: u64,
    pub threads: usize,
}

impl Default for ParthConfig {
    fn default() -> Self {
        ParthConfig {
            dim: 1,
            max_level: MaxLevel::Auto,
            target_leaf: DEFAULT_TARGET_LEAF,
            min_split: DEFAULT_MIN_SPLIT,
            separator: SeparatorKind::LevelSet,
            ordering: OrderingKind::MinDegree,
            aggressive: None,
            seed: 0,
            threads: 1,
        }
    }
}

/// Everything one call produces.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub assembly: AssemblyState,
    pub dirty: DirtyState,
    pub first_call: bool,
    pub n_nodes: usize,
    pub t_sync: Duration,
    pub t_assemble: Duration,
}

impl StepOutcome {
    /// Matrix-level permutation.
    pub fn permutation(&self) -> &Permutation {
        &self.assembly.p_a
    }

    pub fn reuse_ratio(&self) -> f64 {
        crate::assembler::reuse_ratio(&self.assembly, self.n_nodes)
    }
}

pub struct Parth {
    config: ParthConfig,
    separator: Box<dyn SeparatorEngine>,
    ordering: Box<dyn OrderingEngine>,
    tree: Option<HgdTree>,
    graph: Option<SymGraph>,
}

impl Parth {
    pub fn new(config: ParthConfig) -> Self {
        let separator = config.separator.engine();
        let ordering = config.ordering.engine();
        Self::with_engines(config, separator, ordering)
    }

    /// Uses caller-provided engines instead of the configured kinds.
    pub fn with_engines(
        config: ParthConfig,
        separator: Box<dyn SeparatorEngine>,
        ordering: Box<dyn OrderingEngine>,
    ) -> Self {
        Parth {
            config,
            separator,
            ordering,
            tree: None,
            graph: None,
        }
    }

    pub fn config(&self) -> &ParthConfig {
        &self.config
    }

    pub fn tree(&self) -> Option<&HgdTree> {
        self.tree.as_ref()
    }

    pub fn graph(&self) -> Option<&SymGraph> {
        self.graph.as_ref()
    }

    /// Forgets all state; the next call rebuilds from scratch.
    pub fn reset(&mut self) {
        self.tree = None;
        self.graph = None;
    }

    fn decomposer(&self) -> Decomposer<'_> {
        Decomposer::new(self.separator.as_ref(), self.config.seed).with_min_split(self.config.min_split)
    }

    /// Orders `pattern`. `map` relates its graph nodes (rows / dim) to the
    /// previous call's; `None` means the identity, which requires an equal
    /// node count.
    pub fn compute(&mut self, pattern: &SparsityPattern, map: Option<&NodeMap>) -> Result<StepOutcome> {
        let g = compress_by_dim(pattern, self.config.dim)?;
        self.compute_graph(g, map)
    }

    /// Same as [`Parth::compute`] on an already compressed graph.
    pub fn compute_graph(&mut self, g: SymGraph, map: Option<&NodeMap>) -> Result<StepOutcome> {
        let n = g.n_nodes();
        let t0 = Instant::now();
        if let Some(g_old) = &self.graph {
            match map {
                Some(m) => m.check_sizes(g_old.n_nodes(), n)?,
                None if g_old.n_nodes() != n => {
                    return Err(Error::InvalidMap(format!(
                        "node count changed from {} to {n} without a node map",
                        g_old.n_nodes()
                    )));
                }
                None => {}
            }
        }
        let (mut tree, dirty, first_call) = match (self.tree.take(), self.graph.take()) {
            (Some(mut tree), Some(g_old)) => {
                let identity;
                let map = match map {
                    Some(m) => m,
                    None => {
                        identity = NodeMap::identity(n);
                        &identity
                    }
                };
                // on error the state stays cleared and the next call rebuilds
                let dirty = synchronize(&mut tree, &g_old, &g, map, self.decomposer(), self.config.aggressive)?;
                (tree, dirty, false)
            }
            _ => {
                let max_level = match self.config.max_level {
                    MaxLevel::Auto => default_max_level(n.max(1), self.config.target_leaf),
                    MaxLevel::Fixed(l) => l,
                };
                let tree = HgdTree::build(&g, max_level, self.decomposer());
                let dirty = DirtyState::all_dirty(tree.len());
                (tree, dirty, true)
            }
        };
        let t_sync = t0.elapsed();

        let t1 = Instant::now();
        let opts = AssembleOptions {
            engine: self.ordering.as_ref(),
            seed: self.config.seed,
            dim: self.config.dim,
            threads: self.config.threads,
        };
        let assembly = assemble(&mut tree, &g, &dirty.c_b, opts)?;
        let t_assemble = t1.elapsed();

        self.tree = Some(tree);
        self.graph = Some(g);
        Ok(StepOutcome {
            assembly,
            dirty,
            first_call,
            n_nodes: n,
            t_sync,
            t_assemble,
        })
    }
}

/// Orders `pattern` from scratch with the given configuration.
pub fn full_recompute(config: &ParthConfig, pattern: &SparsityPattern) -> Result<StepOutcome> {
    Parth::new(config.clone()).compute(pattern, None)
}
