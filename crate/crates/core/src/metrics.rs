//! Per-step measurements and the fill-degradation monitor.

use std::io::Write;
use std::time::Duration;

use crate::engine::StepOutcome;
use crate::error::{Error, Result};
use crate::graph::SparsityPattern;
use crate::ordering::Permutation;
use crate::symbolic::fill_deviation;

pub const CSV_HEADER: [&str; 12] = [
    "step",
    "label",
    "n",
    "nnz",
    "reuse_ratio",
    "fill_dev",
    "recomp_tree",
    "recomp_nodes",
    "t_sync_us",
    "t_assemble_us",
    "t_baseline_us",
    "reset_recommended",
];

/// Default fill-deviation level above which a reset is recommended.
pub const DEFAULT_RESET_THRESHOLD: f64 = 0.15;
/// Default number of trailing steps the monitor takes the median over.
pub const DEFAULT_WINDOW: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct StepMetrics {
    pub step: usize,
    pub label: String,
    /// Matrix rows.
    pub n: usize,
    pub nnz: usize,
    pub reuse_ratio: f64,
    /// `None` when no baseline was computed.
    pub fill_deviation: Option<f64>,
    pub recomputed_tree_nodes: usize,
    pub recomputed_graph_nodes: usize,
    pub t_sync: Duration,
    pub t_assemble: Duration,
    pub t_baseline: Option<Duration>,
    pub reset_recommended: bool,
}

/// Collects the metrics of one step. `baseline` is the permutation of a full
/// rebuild with the same engines and the time it took.
pub fn step_metrics(
    step: usize,
    label: &str,
    outcome: &StepOutcome,
    pattern: &SparsityPattern,
    baseline: Option<(&Permutation, Duration)>,
) -> Result<StepMetrics> {
    let fill_deviation = match baseline {
        Some((p, _)) if p == outcome.permutation() => Some(0.0),
        Some((p, _)) => Some(fill_deviation(outcome.permutation(), p, pattern)?),
        None => None,
    };
    Ok(StepMetrics {
        step,
        label: label.to_string(),
        n: pattern.n_rows(),
        nnz: pattern.nnz(),
        reuse_ratio: outcome.reuse_ratio(),
        fill_deviation,
        recomputed_tree_nodes: outcome.assembly.recomputed_tree_nodes,
        recomputed_graph_nodes: outcome.assembly.recomputed_graph_nodes,
        t_sync: outcome.t_sync,
        t_assemble: outcome.t_assemble,
        t_baseline: baseline.map(|b| b.1),
        reset_recommended: false,
    })
}

impl StepMetrics {
    pub fn csv_record(&self) -> [String; 12] {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            self.step.to_string(),
            self.label.clone(),
            self.n.to_string(),
            self.nnz.to_string(),
            format!("{:.6}", self.reuse_ratio),
            opt(self.fill_deviation.map(|d| format!("{d:.6}"))),
            self.recomputed_tree_nodes.to_string(),
            self.recomputed_graph_nodes.to_string(),
            self.t_sync.as_micros().to_string(),
            self.t_assemble.as_micros().to_string(),
            opt(self.t_baseline.map(|t| t.as_micros().to_string())),
            self.reset_recommended.to_string(),
        ]
    }
}

/// Streams metrics rows as CSV.
pub struct MetricsWriter<W: Write> {
    inner: csv::Writer<W>,
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("<csv>", io),
        other => Error::io("<csv>", std::io::Error::other(format!("{other:?}"))),
    }
}

impl<W: Write> MetricsWriter<W> {
    /// Writes the header immediately.
    pub fn new(w: W) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(w);
        inner.write_record(CSV_HEADER).map_err(csv_err)?;
        Ok(MetricsWriter { inner })
    }

    pub fn write(&mut self, m: &StepMetrics) -> Result<()> {
        self.inner.write_record(m.csv_record()).map_err(csv_err)?;
        self.inner.flush().map_err(|e| Error::io("<csv>", e))
    }

    pub fn into_inner(self) -> Result<W> {
        self.inner
            .into_inner()
            .map_err(|e| Error::io("<csv>", std::io::Error::other(e.to_string())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonitorStatus {
    Ok,
    ResetRecommended,
}

/// Tracks fill deviations and recommends a reset once their trailing
/// median exceeds the threshold. It never resets anything itself.
#[derive(Debug, Clone)]
pub struct DegradationMonitor {
    threshold: f64,
    window: usize,
    history: Vec<f64>,
}

impl Default for DegradationMonitor {
    fn default() -> Self {
        DegradationMonitor::new(DEFAULT_RESET_THRESHOLD, DEFAULT_WINDOW)
    }
}

impl DegradationMonitor {
    pub fn new(threshold: f64, window: usize) -> Self {
        DegradationMonitor {
            threshold,
            window: window.max(1),
            history: Vec::new(),
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn push(&mut self, fill_deviation: f64) -> MonitorStatus {
        self.history.push(fill_deviation);
        self.status()
    }

    pub fn status(&self) -> MonitorStatus {
        degradation_monitor(&self.history, self.threshold, self.window)
    }

    /// Call after the caller resets the engine.
    pub fn clear(&mut self) {
        self.history.clear();
    }
}

/// Median of the last `window` deviations compared against `threshold`.
pub fn degradation_monitor(history: &[f64], threshold: f64, window: usize) -> MonitorStatus {
    let tail = &history[history.len().saturating_sub(window.max(1))..];
    match median(tail) {
        Some(m) if m > threshold => MonitorStatus::ResetRecommended,
        _ => MonitorStatus::Ok,
    }
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[k] } else { 0.5 * (v[k - 1] + v[k]) })
}

/// Value at fraction `q` of the sorted data, by nearest rank.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = (q.clamp(0.0, 1.0) * v.len() as f64).ceil() as usize;
    Some(v[rank.saturating_sub(1).min(v.len() - 1)])
}
