//! Sequence replay, generation and single-matrix audits behind the `parth`
//! binary. Steps are numbered from 1 in CSV rows and error messages.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::engine::{full_recompute, Parth, ParthConfig};
use crate::error::{Error, Result};
use crate::graph::compress_by_dim;
use crate::io::{read_matrix_market, write_manifest, write_matrix_market, write_node_map, ManifestReader, SequenceStep};
use crate::metrics::{step_metrics, DegradationMonitor, MetricsWriter, MonitorStatus, StepMetrics, DEFAULT_RESET_THRESHOLD, DEFAULT_WINDOW};
use crate::ordering::Permutation;
use crate::symbolic::symbolic_analyze;
use crate::synthetic::{generate_sequence, SequenceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Baseline {
    /// Rebuild from scratch every step to measure fill deviation.
    #[default]
    Full,
    None,
}

impl std::str::FromStr for Baseline {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "full" => Ok(Baseline::Full),
            "none" => Ok(Baseline::None),
            _ => Err(format!("unknown baseline '{s}' (expected full or none)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub config: ParthConfig,
    pub baseline: Baseline,
    pub reset_threshold: f64,
    pub reset_window: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            config: ParthConfig::default(),
            baseline: Baseline::Full,
            reset_threshold: DEFAULT_RESET_THRESHOLD,
            reset_window: DEFAULT_WINDOW,
        }
    }
}

fn at_step(step: usize) -> impl Fn(Error) -> Error {
    move |e| Error::Step {
        step,
        source: Box::new(e),
    }
}

/// Replays every step of a manifest, writing one CSV row per step to `out`.
pub fn run_manifest<W: Write>(manifest: impl AsRef<Path>, opts: &RunOptions, out: W) -> Result<Vec<StepMetrics>> {
    let reader = ManifestReader::open(manifest)?;
    run_steps(reader, opts, out)
}

/// Same as [`run_manifest`] over any source of steps.
pub fn run_steps<W: Write>(
    steps: impl IntoIterator<Item = Result<SequenceStep>>,
    opts: &RunOptions,
    out: W,
) -> Result<Vec<StepMetrics>> {
    let mut writer = MetricsWriter::new(out)?;
    let mut parth = Parth::new(opts.config.clone());
    let mut monitor = DegradationMonitor::new(opts.reset_threshold, opts.reset_window);
    let mut prev_nodes: Option<usize> = None;
    let mut rows = Vec::new();
    for (i, step) in steps.into_iter().enumerate() {
        let k = i + 1;
        let step = step?;
        let m = replay_step(k, &step, opts, &mut parth, &mut monitor, &mut prev_nodes).map_err(at_step(k))?;
        writer.write(&m)?;
        rows.push(m);
    }
    writer.into_inner()?;
    Ok(rows)
}

fn replay_step(
    k: usize,
    step: &SequenceStep,
    opts: &RunOptions,
    parth: &mut Parth,
    monitor: &mut DegradationMonitor,
    prev_nodes: &mut Option<usize>,
) -> Result<StepMetrics> {
    let dim = opts.config.dim;
    let data = step.load_matrix()?;
    let g = compress_by_dim(&data.pattern, dim)?;
    let n_nodes = g.n_nodes();
    let map = match *prev_nodes {
        Some(n_old) => step.load_map(n_nodes, n_old)?,
        None if step.map_path.is_some() => {
            return Err(Error::InvalidMap("the first step cannot carry a node map".into()));
        }
        None => None,
    };
    let outcome = parth.compute_graph(g, map.as_ref())?;
    *prev_nodes = Some(n_nodes);

    let baseline = match opts.baseline {
        Baseline::Full => {
            let t = Instant::now();
            let full = full_recompute(&opts.config, &data.pattern)?;
            Some((full.assembly.p_a, t.elapsed()))
        }
        Baseline::None => None,
    };
    let mut m = step_metrics(
        k,
        &step.label,
        &outcome,
        &data.pattern,
        baseline.as_ref().map(|(p, t)| (p, *t)),
    )?;
    if let Some(d) = m.fill_deviation {
        m.reset_recommended = monitor.push(d) == MonitorStatus::ResetRecommended;
    }
    Ok(m)
}

/// Writes a generated sequence into `dir` and returns the manifest path.
pub fn generate_to_dir(spec: &SequenceSpec, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut steps = Vec::new();
    for (i, s) in generate_sequence(spec)?.into_iter().enumerate() {
        let name = format!("step_{i:04}");
        let matrix = dir.join(format!("{name}.mtx"));
        write_matrix_market(&matrix, &s.pattern, Some(&s.values))?;
        let mut step = SequenceStep::new(matrix).with_label(name.clone());
        if let Some(map) = &s.map {
            let path = dir.join(format!("{name}.map"));
            write_node_map(&path, map)?;
            step = step.with_map(path);
        }
        steps.push(step);
    }
    let manifest = dir.join("manifest.txt");
    write_manifest(&manifest, &steps)?;
    Ok(manifest)
}

/// Outcome of auditing one matrix.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub n_rows: usize,
    pub n_nodes: usize,
    pub tree_nodes: usize,
    pub partition: std::result::Result<(), String>,
    pub separators: std::result::Result<(), String>,
    pub bijection: std::result::Result<(), String>,
    pub nnz_l_natural: usize,
    pub nnz_l_parth: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.partition.is_ok() && self.separators.is_ok() && self.bijection.is_ok()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = |r: &std::result::Result<(), String>| match r {
            Ok(()) => "ok".to_string(),
            Err(e) => format!("FAIL ({e})"),
        };
        writeln!(f, "rows: {}", self.n_rows)?;
        writeln!(f, "graph nodes: {}", self.n_nodes)?;
        writeln!(f, "tree nodes: {}", self.tree_nodes)?;
        writeln!(f, "partition: {}", status(&self.partition))?;
        writeln!(f, "separators: {}", status(&self.separators))?;
        writeln!(f, "bijection: {}", status(&self.bijection))?;
        writeln!(f, "nnz(L) natural: {}", self.nnz_l_natural)?;
        write!(f, "nnz(L) parth: {}", self.nnz_l_parth)
    }
}

/// Builds the decomposition for one matrix file and audits every invariant.
pub fn check_matrix(path: impl AsRef<Path>, config: &ParthConfig) -> Result<CheckReport> {
    let data = read_matrix_market(path)?;
    let pattern = &data.pattern;
    let g = compress_by_dim(pattern, config.dim)?;
    let mut parth = Parth::new(config.clone());
    let outcome = parth.compute_graph(g, None)?;
    let (tree, g) = match (parth.tree(), parth.graph()) {
        (Some(t), Some(g)) => (t, g),
        _ => return Err(Error::StaleTree("engine kept no state".into())),
    };
    let p_a = outcome.permutation();
    let bijection = Permutation::new(p_a.as_slice().to_vec())
        .map(|_| ())
        .map_err(|e| e.to_string())
        .and_then(|_| {
            if p_a.len() == pattern.n_rows() {
                Ok(())
            } else {
                Err(format!("length {} for {} rows", p_a.len(), pattern.n_rows()))
            }
        });
    Ok(CheckReport {
        n_rows: pattern.n_rows(),
        n_nodes: g.n_nodes(),
        tree_nodes: tree.len(),
        partition: tree.check_partition(g.n_nodes()),
        separators: tree.check_separators(g),
        bijection,
        nnz_l_natural: symbolic_analyze(pattern, &Permutation::identity(pattern.n_rows()))?.nnz_l,
        nnz_l_parth: symbolic_analyze(pattern, p_a)?.nnz_l,
    })
}
