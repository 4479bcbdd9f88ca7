//! K-Sil: silhouette-guided instance-weighted k-means.
//!
//! A clustering library built around a k-means refinement loop that weights
//! each point by its silhouette score inside its cluster, so well-placed
//! points pull centroids harder than borderline or noisy ones. The crate
//! also ships the exact silhouette, two cheaper approximations, weighted
//! baselines (density and LOF instance weighting), seeded synthetic dataset
//! generators, and the statistical machinery (Wilcoxon signed-rank, NMI,
//! Spearman, t-intervals) used to compare algorithms.

pub mod baselines;
pub mod config;
pub mod dataset;
pub mod engine;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod partition;
pub mod result;
pub mod silhouette;
pub mod synth;
pub mod weighting;

pub use config::{
    InitMethod, KsilConfig, Objective, Sensitivity, WeightScheme, DEFAULT_ALPHA, DEFAULT_EPSILON,
    DEFAULT_MAX_ITER, DEFAULT_P_GRID, DEFAULT_TAU,
};
pub use dataset::{standardize, validate_dataset, Dataset};
pub use engine::{
    assign_labels, auto_tune_p, compute_objective_f, core_periphery_split, init_partition,
    reinit_empty, run_ksil, run_ksil_observed, weighted_centroid_update, CorePeripherySplit,
    IterationState, ReinitStrategy,
};
pub use error::{Error, Result};
pub use partition::Partition;
pub use result::{IterationRecord, RunResult, Termination};
pub use silhouette::{
    aggregate, approx_silhouette_apr, approx_silhouette_aps, exact_silhouette, sample_indices,
    ClusterStats, SilhouetteMode, SilhouetteReport,
};
pub use weighting::{
    dense_rank_desc, exponential_weights, power_weights, SchemeParams, WeightVector,
};

pub use baselines::{
    density_weights, lof_weights, run_kmeans, run_kmeans_observed, run_weighted_kmeans,
    tune_neighborhood, BaselineWeighting, NeighborhoodParams, DEFAULT_H_GRID,
    NMI_DENSITY_NEIGHBORS, NMI_LOF_NEIGHBORS,
};
pub use evaluation::{
    evaluate_approximations, exact_objective, nmi, relative_improvement, run_comparison_protocol,
    spearman_rho, t_confidence_interval, wilcoxon_signed_rank, AlgorithmSpec, Alternative,
    ApproxEvalRow, ComparisonReport, ProtocolConfig, WilcoxonTest,
};
pub use synth::{approximation_battery, generate_synthetic, Family, SyntheticSpec};
