use serde::{Deserialize, Serialize};

use crate::partition::Partition;

/// Why a refinement run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// Mean centroid movement fell below tau.
    Threshold,
    /// The iteration cap was reached.
    MaxIter,
}

/// One record of the per-iteration trace.
///
/// Record 0 describes the initial partition (movement 0); each later record
/// describes the state after one refinement step. `objective` is the
/// aggregation objective of that iteration's labels, `weighted_objective`
/// the weighted silhouette sum of the same iteration's scores and weights,
/// and `mean_movement` the average centroid displacement from the previous
/// iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub objective: f64,
    pub weighted_objective: f64,
    pub mean_movement: f64,
}

/// Outcome of a clustering run: the best-observed partition plus the trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_partition: Partition,
    /// Highest objective value observed across the trace.
    pub best_objective: f64,
    /// Number of trace records, counting the initial evaluation.
    pub iterations_run: usize,
    pub trace: Vec<IterationRecord>,
    pub terminated_by: Termination,
}

impl RunResult {
    /// Check the retention invariants: the trace is non-empty, its length
    /// matches `iterations_run`, and `best_objective` is the trace maximum.
    pub fn check_retention(&self) -> bool {
        if self.trace.is_empty() || self.trace.len() != self.iterations_run {
            return false;
        }
        let max = self
            .trace
            .iter()
            .map(|r| r.objective)
            .fold(f64::NEG_INFINITY, f64::max);
        self.best_objective == max
    }
}
