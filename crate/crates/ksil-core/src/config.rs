use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Silhouette aggregation objective maximized by the refinement loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Objective {
    /// Mean over clusters of per-cluster mean silhouettes (size-independent).
    Macro,
    /// Mean silhouette over all evaluated points.
    Micro,
    /// `alpha * micro + (1 - alpha) * macro`.
    Combined { alpha: f64 },
}

impl Objective {
    pub fn alpha(&self) -> f64 {
        match self {
            Objective::Combined { alpha } => *alpha,
            _ => DEFAULT_ALPHA,
        }
    }

    /// Extract the objective value from (micro, macro, combined) aggregates.
    pub fn pick(&self, micro: f64, macro_avg: f64, combined: f64) -> f64 {
        match self {
            Objective::Macro => macro_avg,
            Objective::Micro => micro,
            Objective::Combined { .. } => combined,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Objective::Macro => "macro",
            Objective::Micro => "micro",
            Objective::Combined { .. } => "combined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitMethod {
    Random,
    KMeansPlusPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightScheme {
    Power,
    Exponential,
}

impl WeightScheme {
    pub fn label(&self) -> &'static str {
        match self {
            WeightScheme::Power => "power",
            WeightScheme::Exponential => "exp",
        }
    }
}

/// Weight-sensitivity parameter: a fixed value or a grid to search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Sensitivity {
    Fixed(f64),
    Auto(Vec<f64>),
}

pub const DEFAULT_TAU: f64 = 1e-4;
pub const DEFAULT_MAX_ITER: usize = 100;
pub const DEFAULT_EPSILON: f64 = 1e-8;
pub const DEFAULT_ALPHA: f64 = 0.5;

/// Default grid searched by sensitivity auto-tuning.
pub const DEFAULT_P_GRID: [f64; 10] = [0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 16.0, 20.0];

/// Full configuration of a K-Sil run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsilConfig {
    pub k: usize,
    pub objective: Objective,
    pub init: InitMethod,
    pub scheme: WeightScheme,
    pub sensitivity: Sensitivity,
    /// Total number of points scored per iteration; `None` scores all.
    pub sample_size: Option<usize>,
    /// Use the refined centroid/SS silhouette approximation in the loop.
    pub approximate: bool,
    pub tau: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Stability constant of the weighting schemes.
    pub epsilon: f64,
}

impl KsilConfig {
    pub fn new(k: usize) -> Self {
        KsilConfig {
            k,
            objective: Objective::Macro,
            init: InitMethod::KMeansPlusPlus,
            scheme: WeightScheme::Power,
            sensitivity: Sensitivity::Fixed(2.0),
            sample_size: None,
            approximate: false,
            tau: DEFAULT_TAU,
            max_iter: DEFAULT_MAX_ITER,
            seed: 0,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn with_scheme(mut self, scheme: WeightScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_sensitivity(mut self, sensitivity: Sensitivity) -> Self {
        self.sensitivity = sensitivity;
        self
    }

    pub fn validate(&self, data: &Dataset) -> Result<()> {
        let n = data.n();
        if self.k < 2 {
            return Err(Error::KTooSmall { k: self.k });
        }
        if self.k >= n {
            return Err(Error::KTooLarge { k: self.k, n });
        }
        if !self.tau.is_finite() || self.tau <= 0.0 {
            return Err(Error::InvalidConfig("tau must be > 0".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max_iter must be >= 1".into()));
        }
        if let Objective::Combined { alpha } = self.objective {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::InvalidConfig(format!(
                    "alpha = {alpha} must lie in [0, 1]"
                )));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1e-3) {
            return Err(Error::InvalidConfig(format!(
                "epsilon = {} must lie in (0, 1e-3]",
                self.epsilon
            )));
        }
        match &self.sensitivity {
            Sensitivity::Fixed(p) => {
                if !(p.is_finite() && *p >= 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "sensitivity p = {p} must be finite and >= 0"
                    )));
                }
            }
            Sensitivity::Auto(grid) => {
                if grid.is_empty() {
                    return Err(Error::InvalidConfig("auto-tune grid is empty".into()));
                }
                if grid.iter().any(|p| !p.is_finite() || *p < 0.0) {
                    return Err(Error::InvalidConfig(
                        "auto-tune grid values must be finite and >= 0".into(),
                    ));
                }
            }
        }
        if let Some(m) = self.sample_size {
            if m < self.k {
                return Err(Error::SampleTooSmall { m, k: self.k });
            }
            if m > n {
                return Err(Error::InvalidConfig(format!(
                    "sample size m = {m} exceeds n = {n}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::validate_dataset;

    fn tiny() -> Dataset {
        validate_dataset(vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]], None, "t").unwrap()
    }

    #[test]
    fn rejects_k_out_of_range() {
        let data = tiny();
        assert!(matches!(
            KsilConfig::new(1).validate(&data),
            Err(Error::KTooSmall { .. })
        ));
        assert!(matches!(
            KsilConfig::new(4).validate(&data),
            Err(Error::KTooLarge { .. })
        ));
        assert!(KsilConfig::new(2).validate(&data).is_ok());
    }

    #[test]
    fn rejects_sample_smaller_than_k() {
        let data = tiny();
        let mut cfg = KsilConfig::new(3);
        cfg.sample_size = Some(2);
        assert!(matches!(
            cfg.validate(&data),
            Err(Error::SampleTooSmall { m: 2, k: 3 })
        ));
    }

    #[test]
    fn rejects_bad_alpha() {
        let data = tiny();
        let cfg = KsilConfig::new(2).with_objective(Objective::Combined { alpha: 1.5 });
        assert!(cfg.validate(&data).is_err());
    }
}
