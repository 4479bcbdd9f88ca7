use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An assignment of n points to k clusters together with the k centroids.
///
/// Every partition returned by a clustering operation in this crate has all
/// k clusters non-empty; [`Partition::validate`] checks that along with the
/// structural invariants and is used by the test suites as a shared oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub k: usize,
}

impl Partition {
    pub fn new(assignments: Vec<usize>, centroids: Vec<Vec<f64>>) -> Self {
        let k = centroids.len();
        Partition {
            assignments,
            centroids,
            k,
        }
    }

    pub fn n(&self) -> usize {
        self.assignments.len()
    }

    /// Point indices of each cluster, in ascending point order.
    pub fn members_by_cluster(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.k];
        for (i, &c) in self.assignments.iter().enumerate() {
            members[c].push(i);
        }
        members
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &c in &self.assignments {
            sizes[c] += 1;
        }
        sizes
    }

    /// Check the partition invariants: assignments index valid clusters,
    /// centroids share the point dimension, and no cluster is empty.
    pub fn validate(&self, n: usize, dim: usize) -> Result<()> {
        if self.assignments.len() != n {
            return Err(Error::LengthMismatch {
                left: self.assignments.len(),
                right: n,
            });
        }
        if self.centroids.len() != self.k {
            return Err(Error::InvalidConfig(format!(
                "{} centroids for k = {}",
                self.centroids.len(),
                self.k
            )));
        }
        for (j, c) in self.centroids.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::RaggedDimensions {
                    row: j,
                    expected: dim,
                    found: c.len(),
                });
            }
        }
        let sizes = self.cluster_sizes();
        if let Some(&bad) = self.assignments.iter().find(|&&c| c >= self.k) {
            return Err(Error::InvalidConfig(format!(
                "assignment references cluster {bad} but k = {}",
                self.k
            )));
        }
        if let Some(j) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidConfig(format!("cluster {j} is empty")));
        }
        Ok(())
    }
}
