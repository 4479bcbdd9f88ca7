//! External and statistical evaluation: normalized mutual information,
//! Spearman rank correlation, the Wilcoxon signed-rank test, relative
//! improvement summaries, t-distribution confidence intervals, and the
//! multi-trial comparison protocol that drives the benchmark reports.

use std::collections::HashMap;
use std::hash::Hash;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::baselines::{baseline_weights, run_kmeans, run_weighted_kmeans, BaselineWeighting};
use crate::config::{InitMethod, KsilConfig, Objective, Sensitivity, WeightScheme};
use crate::dataset::Dataset;
use crate::engine::run_ksil;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::silhouette::{
    approx_silhouette_apr, approx_silhouette_aps, exact_silhouette, ClusterStats,
};

/// Normalized mutual information between two labelings, in [0, 1].
///
/// Mutual information with natural logarithms, normalized by the arithmetic
/// mean of the two label entropies; the degenerate 0/0 case (single cluster
/// against single cluster) is defined as 0.
pub fn nmi<A, B>(labels_a: &[A], labels_b: &[B]) -> Result<f64>
where
    A: Hash + Eq,
    B: Hash + Eq,
{
    if labels_a.len() != labels_b.len() {
        return Err(Error::LengthMismatch {
            left: labels_a.len(),
            right: labels_b.len(),
        });
    }
    if labels_a.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let n = labels_a.len() as f64;
    let ids_a = dense_ids(labels_a);
    let ids_b = dense_ids(labels_b);
    let ka = 1 + *ids_a.iter().max().unwrap();
    let kb = 1 + *ids_b.iter().max().unwrap();
    let mut joint = vec![vec![0usize; kb]; ka];
    for (&a, &b) in ids_a.iter().zip(&ids_b) {
        joint[a][b] += 1;
    }
    let row: Vec<usize> = joint.iter().map(|r| r.iter().sum()).collect();
    let col: Vec<usize> = (0..kb).map(|j| joint.iter().map(|r| r[j]).sum()).collect();
    let mut mi = 0.0;
    for (i, r) in joint.iter().enumerate() {
        for (j, &c) in r.iter().enumerate() {
            if c > 0 {
                let p = c as f64 / n;
                mi += p * ((c as f64 * n) / (row[i] as f64 * col[j] as f64)).ln();
            }
        }
    }
    let h = |counts: &[usize]| -> f64 {
        counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let denom = (h(&row) + h(&col)) / 2.0;
    if denom <= 0.0 {
        return Ok(0.0);
    }
    Ok((mi / denom).clamp(0.0, 1.0))
}

fn dense_ids<T: Hash + Eq>(labels: &[T]) -> Vec<usize> {
    let mut map: HashMap<&T, usize> = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Average ranks (1-based), ties sharing the mean of their positions.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean_rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mean_rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: Pearson correlation of average-ranked values.
pub fn spearman_rho(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::TooFewSamples { n: a.len() });
    }
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = ra.len() as f64;
    let mean_a = ra.iter().sum::<f64>() / n;
    let mean_b = rb.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (x, y) in ra.iter().zip(&rb) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::ConstantSequence);
    }
    Ok(cov / (var_a.sqrt() * var_b.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alternative {
    /// Positive differences dominate (the directional protocol question).
    Greater,
    TwoSided,
}

/// Result of a Wilcoxon signed-rank test. `statistic` is W+, the sum of
/// ranks of positive differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonTest {
    pub statistic: f64,
    pub p_value: f64,
    pub n_used: usize,
    pub zeros_dropped: usize,
    pub exact: bool,
}

/// Wilcoxon signed-rank test on paired differences.
///
/// Zero differences are dropped; absolute differences are ranked with
/// average ranks for ties. The exact null distribution (full enumeration
/// over sign assignments) is used for n <= 25 without ties, otherwise the
/// normal approximation with tie and continuity corrections.
pub fn wilcoxon_signed_rank(diffs: &[f64], alternative: Alternative) -> Result<WilcoxonTest> {
    let non_zero: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    let zeros_dropped = diffs.len() - non_zero.len();
    let n = non_zero.len();
    if n < 5 {
        return Err(Error::TooFewPairs { n });
    }
    let abs: Vec<f64> = non_zero.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&abs);
    let mut sorted_abs = abs.clone();
    sorted_abs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let has_ties = sorted_abs.windows(2).any(|w| w[0] == w[1]);
    let w_plus: f64 = non_zero
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();

    let (p_value, exact) = if n <= 25 && !has_ties {
        // Without ties the ranks are exactly 1..=n; enumerate the null
        // distribution of W+ by dynamic programming over subset sums.
        let max_sum = n * (n + 1) / 2;
        let mut counts = vec![0u64; max_sum + 1];
        counts[0] = 1;
        for r in 1..=n {
            for w in (r..=max_sum).rev() {
                counts[w] += counts[w - r];
            }
        }
        let total = 2f64.powi(n as i32);
        let w_obs = w_plus.round() as usize;
        let p_ge: f64 = counts[w_obs..].iter().map(|&c| c as f64).sum::<f64>() / total;
        let p_le: f64 = counts[..=w_obs].iter().map(|&c| c as f64).sum::<f64>() / total;
        let p = match alternative {
            Alternative::Greater => p_ge,
            Alternative::TwoSided => (2.0 * p_ge.min(p_le)).min(1.0),
        };
        (p, true)
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let mut tie_term = 0.0;
        let mut i = 0;
        while i < sorted_abs.len() {
            let mut j = i;
            while j + 1 < sorted_abs.len() && sorted_abs[j + 1] == sorted_abs[i] {
                j += 1;
            }
            let t = (j - i + 1) as f64;
            tie_term += t * t * t - t;
            i = j + 1;
        }
        let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
        let sigma = var.sqrt();
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        let p_greater = 1.0 - normal.cdf((w_plus - 0.5 - mean) / sigma);
        let p_less = normal.cdf((w_plus + 0.5 - mean) / sigma);
        let p = match alternative {
            Alternative::Greater => p_greater,
            Alternative::TwoSided => (2.0 * p_greater.min(p_less)).min(1.0),
        };
        (p, false)
    };
    Ok(WilcoxonTest {
        statistic: w_plus,
        p_value,
        n_used: n,
        zeros_dropped,
        exact,
    })
}

/// Mean percent improvement of paired scores: mean of 100 * (a - b) / |b|.
pub fn relative_improvement(scores_a: &[f64], scores_b: &[f64]) -> Result<f64> {
    if scores_a.len() != scores_b.len() {
        return Err(Error::LengthMismatch {
            left: scores_a.len(),
            right: scores_b.len(),
        });
    }
    if scores_a.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let mut total = 0.0;
    for (i, (a, b)) in scores_a.iter().zip(scores_b).enumerate() {
        if *b == 0.0 {
            return Err(Error::ZeroBaseline { index: i });
        }
        total += 100.0 * (a - b) / b.abs();
    }
    Ok(total / scores_a.len() as f64)
}

/// Student-t confidence interval: mean +/- t_{(1+level)/2, n-1} * s / sqrt(n),
/// with s the sample standard deviation.
pub fn t_confidence_interval(samples: &[f64], level: f64) -> Result<(f64, f64, f64)> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::TooFewSamples { n });
    }
    if !(0.0 < level && level < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "confidence level {level} must lie in (0, 1)"
        )));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let s = var.sqrt();
    if s == 0.0 {
        return Ok((mean, mean, mean));
    }
    let t = StudentsT::new(0.0, 1.0, nf - 1.0)
        .expect("valid t distribution")
        .inverse_cdf((1.0 + level) / 2.0);
    let half = t * s / nf.sqrt();
    Ok((mean, mean - half, mean + half))
}

/// Exact silhouette objective of a partition over the full dataset.
pub fn exact_objective(data: &Dataset, part: &Partition, objective: Objective) -> Result<f64> {
    let all: Vec<usize> = (0..data.n()).collect();
    let report = exact_silhouette(data, part, &all)?;
    Ok(report.objective(objective))
}

/// One algorithm entry of the comparison protocol. The first entry is the
/// candidate compared against each of the rest.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmSpec {
    Ksil {
        scheme: WeightScheme,
        sensitivity: Sensitivity,
        approximate: bool,
        sample_size: Option<usize>,
    },
    KMeans,
    Density {
        h: usize,
    },
    Lof {
        h: usize,
    },
}

impl AlgorithmSpec {
    pub fn label(&self) -> String {
        match self {
            AlgorithmSpec::Ksil { .. } => "ksil".into(),
            AlgorithmSpec::KMeans => "kmeans".into(),
            AlgorithmSpec::Density { h } => format!("density(h={h})"),
            AlgorithmSpec::Lof { h } => format!("lof(h={h})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub k_values: Vec<usize>,
    pub trials: usize,
    pub objective: Objective,
    pub algorithms: Vec<AlgorithmSpec>,
    pub ground_truth_k: Option<usize>,
    pub init: InitMethod,
    pub tau: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Direction of the paired test; the protocol's question is directional.
    pub alternative: Alternative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KScores {
    pub k: usize,
    pub trial_scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmScores {
    pub algorithm: String,
    pub per_k: Vec<KScores>,
}

/// Paired candidate-vs-baseline outcome over a set of trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedComparison {
    /// None when every paired difference was zero (degenerate test).
    pub wilcoxon: Option<WilcoxonTest>,
    pub significant: bool,
    pub mean_relative_improvement_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineComparison {
    pub baseline: String,
    pub across_k: PairedComparison,
    pub at_ground_truth_k: Option<PairedComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NmiSummary {
    pub algorithm: String,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub per_trial: Vec<f64>,
}

/// Structured benchmark report: raw per-trial scores, paired statistics
/// against each baseline, and NMI summaries when ground truth exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub dataset: String,
    pub n: usize,
    pub dim: usize,
    pub objective: String,
    pub alternative: String,
    pub k_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub ground_truth_k: Option<usize>,
    pub algorithms: Vec<String>,
    pub scores: Vec<AlgorithmScores>,
    pub comparisons: Vec<BaselineComparison>,
    pub nmi: Vec<NmiSummary>,
}

const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// Run every algorithm from shared initial centroids for each (k, trial)
/// pair, score each run with the exact silhouette objective, and aggregate
/// paired Wilcoxon tests, mean relative improvements, and NMI summaries.
pub fn run_comparison_protocol(data: &Dataset, cfg: &ProtocolConfig) -> Result<ComparisonReport> {
    if cfg.trials < 5 {
        return Err(Error::InvalidConfig(format!(
            "trials = {} must be >= 5",
            cfg.trials
        )));
    }
    if cfg.algorithms.is_empty() {
        return Err(Error::InvalidConfig("no algorithms configured".into()));
    }
    if cfg.k_values.is_empty() {
        return Err(Error::InvalidConfig("empty k range".into()));
    }
    for &k in &cfg.k_values {
        if k < 2 {
            return Err(Error::KTooSmall { k });
        }
        if k >= data.n() {
            return Err(Error::KTooLarge { k, n: data.n() });
        }
    }
    // Static baseline weights depend only on the data; compute them once.
    let mut static_weights: Vec<Option<Vec<f64>>> = Vec::new();
    for algo in &cfg.algorithms {
        static_weights.push(match algo {
            AlgorithmSpec::Density { h } => Some(baseline_weights(
                data,
                BaselineWeighting::Density,
                crate::baselines::NeighborhoodParams::new(*h),
            )?),
            AlgorithmSpec::Lof { h } => Some(baseline_weights(
                data,
                BaselineWeighting::Lof,
                crate::baselines::NeighborhoodParams::new(*h),
            )?),
            _ => None,
        });
    }
    // Derive one seed per (k, trial) up front so jobs can run concurrently
    // while staying deterministic.
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut job_seeds = Vec::with_capacity(cfg.k_values.len() * cfg.trials);
    for _ in 0..cfg.k_values.len() * cfg.trials {
        job_seeds.push(master.next_u64());
    }
    let jobs: Vec<(usize, usize, u64)> = cfg
        .k_values
        .iter()
        .enumerate()
        .flat_map(|(ki, _)| (0..cfg.trials).map(move |t| (ki, t)))
        .zip(job_seeds)
        .map(|((ki, t), s)| (ki, t, s))
        .collect();

    struct JobOutcome {
        ki: usize,
        trial: usize,
        // Per algorithm: exact objective score and the run's labels.
        scored: Vec<(f64, Vec<usize>)>,
    }

    let outcomes: Vec<Result<JobOutcome>> = jobs
        .par_iter()
        .map(|&(ki, trial, seed)| {
            let k = cfg.k_values[ki];
            let mut scored = Vec::with_capacity(cfg.algorithms.len());
            for (algo, weights) in cfg.algorithms.iter().zip(&static_weights) {
                let run = match algo {
                    AlgorithmSpec::Ksil {
                        scheme,
                        sensitivity,
                        approximate,
                        sample_size,
                    } => {
                        let mut kcfg = KsilConfig::new(k)
                            .with_seed(seed)
                            .with_objective(cfg.objective)
                            .with_scheme(*scheme)
                            .with_sensitivity(sensitivity.clone());
                        kcfg.approximate = *approximate;
                        kcfg.sample_size = *sample_size;
                        kcfg.init = cfg.init;
                        kcfg.tau = cfg.tau;
                        kcfg.max_iter = cfg.max_iter;
                        run_ksil(data, &kcfg)?
                    }
                    AlgorithmSpec::KMeans => run_kmeans(
                        data,
                        k,
                        cfg.init,
                        cfg.objective,
                        cfg.tau,
                        cfg.max_iter,
                        seed,
                    )?,
                    AlgorithmSpec::Density { .. } | AlgorithmSpec::Lof { .. } => {
                        run_weighted_kmeans(
                            data,
                            k,
                            weights.as_ref().expect("precomputed weights"),
                            cfg.init,
                            cfg.objective,
                            cfg.tau,
                            cfg.max_iter,
                            seed,
                        )?
                    }
                };
                debug_assert!(run.check_retention(), "retention invariant violated");
                let score = exact_objective(data, &run.best_partition, cfg.objective)?;
                scored.push((score, run.best_partition.assignments));
            }
            Ok(JobOutcome { ki, trial, scored })
        })
        .collect();

    let n_algos = cfg.algorithms.len();
    let mut scores = vec![vec![vec![0.0; cfg.trials]; cfg.k_values.len()]; n_algos];
    let gt_ki = cfg
        .ground_truth_k
        .and_then(|gk| cfg.k_values.iter().position(|&k| k == gk));
    let mut gt_labels: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); cfg.trials]; n_algos];
    for outcome in outcomes {
        let outcome = outcome?;
        for (a, (score, labels)) in outcome.scored.into_iter().enumerate() {
            scores[a][outcome.ki][outcome.trial] = score;
            if Some(outcome.ki) == gt_ki {
                gt_labels[a][outcome.trial] = labels;
            }
        }
    }

    let flatten =
        |a: usize| -> Vec<f64> { scores[a].iter().flat_map(|per_k| per_k.clone()).collect() };
    let compare = |cand: &[f64], base: &[f64]| -> PairedComparison {
        let diffs: Vec<f64> = cand.iter().zip(base).map(|(c, b)| c - b).collect();
        let wilcoxon = wilcoxon_signed_rank(&diffs, cfg.alternative).ok();
        let significant = wilcoxon
            .map(|t| t.p_value < SIGNIFICANCE_LEVEL)
            .unwrap_or(false);
        let improvement = if base.contains(&0.0) {
            None
        } else {
            relative_improvement(cand, base).ok()
        };
        PairedComparison {
            wilcoxon,
            significant,
            mean_relative_improvement_pct: improvement,
        }
    };

    let candidate_all = flatten(0);
    let mut comparisons = Vec::new();
    for a in 1..n_algos {
        let base_all = flatten(a);
        let across_k = compare(&candidate_all, &base_all);
        let at_ground_truth_k = gt_ki.map(|ki| compare(&scores[0][ki], &scores[a][ki]));
        comparisons.push(BaselineComparison {
            baseline: cfg.algorithms[a].label(),
            across_k,
            at_ground_truth_k,
        });
    }

    let mut nmi_summaries = Vec::new();
    if let (Some(truth), Some(_)) = (data.labels(), gt_ki) {
        for (a, algo) in cfg.algorithms.iter().enumerate() {
            let per_trial: Vec<f64> = gt_labels[a]
                .iter()
                .map(|labels| nmi(labels, truth))
                .collect::<Result<_>>()?;
            let (mean, lo, hi) = t_confidence_interval(&per_trial, 0.95)?;
            nmi_summaries.push(NmiSummary {
                algorithm: algo.label(),
                mean,
                ci_low: lo,
                ci_high: hi,
                per_trial,
            });
        }
    }

    Ok(ComparisonReport {
        dataset: data.name().to_string(),
        n: data.n(),
        dim: data.dim(),
        objective: cfg.objective.label().to_string(),
        alternative: match cfg.alternative {
            Alternative::Greater => "greater".to_string(),
            Alternative::TwoSided => "two-sided".to_string(),
        },
        k_values: cfg.k_values.clone(),
        trials: cfg.trials,
        seed: cfg.seed,
        ground_truth_k: cfg.ground_truth_k,
        algorithms: cfg.algorithms.iter().map(|a| a.label()).collect(),
        scores: cfg
            .algorithms
            .iter()
            .enumerate()
            .map(|(a, algo)| AlgorithmScores {
                algorithm: algo.label(),
                per_k: cfg
                    .k_values
                    .iter()
                    .enumerate()
                    .map(|(ki, &k)| KScores {
                        k,
                        trial_scores: scores[a][ki].clone(),
                    })
                    .collect(),
            })
            .collect(),
        comparisons,
        nmi: nmi_summaries,
    })
}

/// One row of the silhouette-approximation comparison: rank correlations of
/// ApR and ApS against exact per-point scores, plus the three aggregates,
/// all on the k-means partition of the dataset at the given k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxEvalRow {
    pub dataset: String,
    pub n: usize,
    pub dim: usize,
    pub k: usize,
    pub spearman_apr: f64,
    pub spearman_aps: f64,
    pub exact_micro: f64,
    pub exact_macro: f64,
    pub apr_micro: f64,
    pub apr_macro: f64,
    pub aps_micro: f64,
    pub aps_macro: f64,
}

pub fn evaluate_approximations(
    data: &Dataset,
    k: usize,
    init: InitMethod,
    tau: f64,
    max_iter: usize,
    seed: u64,
) -> Result<ApproxEvalRow> {
    let run = run_kmeans(data, k, init, Objective::Macro, tau, max_iter, seed)?;
    let part = &run.best_partition;
    let all: Vec<usize> = (0..data.n()).collect();
    let exact = exact_silhouette(data, part, &all)?;
    let stats = ClusterStats::compute(data, part);
    let apr = approx_silhouette_apr(data, &stats, part, &all)?;
    let aps = approx_silhouette_aps(data, part, &all)?;
    Ok(ApproxEvalRow {
        dataset: data.name().to_string(),
        n: data.n(),
        dim: data.dim(),
        k,
        spearman_apr: spearman_rho(&apr.per_point, &exact.per_point)?,
        spearman_aps: spearman_rho(&aps.per_point, &exact.per_point)?,
        exact_micro: exact.micro,
        exact_macro: exact.macro_avg,
        apr_micro: apr.micro,
        apr_macro: apr.macro_avg,
        aps_micro: aps.micro,
        aps_macro: aps.macro_avg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nmi_identical_labelings() {
        let a = [0usize, 0, 1, 1, 2, 2];
        assert!((nmi(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nmi_invariant_under_renaming() {
        let a = [0usize, 0, 1, 1, 2, 2];
        let renamed = ["z", "z", "x", "x", "q", "q"];
        assert!((nmi(&a, &renamed).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nmi_independent_partition_is_zero() {
        let a = [0usize, 0, 1, 1];
        let b = [0usize, 1, 0, 1];
        assert!(nmi(&a, &b).unwrap().abs() < 1e-12);
    }

    #[test]
    fn nmi_degenerate_single_clusters() {
        let a = [7usize, 7, 7];
        let b = ["x", "x", "x"];
        assert_eq!(nmi(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn nmi_symmetry() {
        let a = [0usize, 1, 1, 2, 0, 2, 1];
        let b = [1usize, 1, 0, 2, 2, 2, 0];
        assert!((nmi(&a, &b).unwrap() - nmi(&b, &a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn spearman_examples() {
        assert!((spearman_rho(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((spearman_rho(&[1.0, 2.0, 3.0], &[30.0, 20.0, 10.0]).unwrap() + 1.0).abs() < 1e-12);
        let rho = spearman_rho(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((rho - 0.8).abs() < 1e-12);
    }

    #[test]
    fn spearman_constant_rejected() {
        assert!(matches!(
            spearman_rho(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::ConstantSequence)
        ));
    }

    #[test]
    fn spearman_monotone_transform_invariant() {
        let a = [0.3, -1.0, 2.5, 0.9, 4.0, -0.2];
        let b = [1.0, 0.4, 9.0, 2.2, 3.3, 0.6];
        let rho = spearman_rho(&a, &b).unwrap();
        let a_t: Vec<f64> = a.iter().map(|x| x.exp()).collect();
        let b_t: Vec<f64> = b.iter().map(|x| x.powi(3)).collect();
        assert!((spearman_rho(&a_t, &b_t).unwrap() - rho).abs() < 1e-12);
    }

    #[test]
    fn wilcoxon_all_positive_exact() {
        let diffs: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let t = wilcoxon_signed_rank(&diffs, Alternative::Greater).unwrap();
        assert!(t.exact);
        assert_eq!(t.statistic, 55.0);
        assert!((t.p_value - 1.0 / 1024.0).abs() < 1e-12);
    }

    #[test]
    fn wilcoxon_antisymmetric_insignificant() {
        let diffs = [1.5, -1.5, 2.5, -2.5, 3.5, -3.5, 4.5, -4.5, 5.5, -5.5];
        let t = wilcoxon_signed_rank(&diffs, Alternative::Greater).unwrap();
        assert!(t.p_value > 0.3 && t.p_value < 0.7, "p = {}", t.p_value);
    }

    #[test]
    fn wilcoxon_all_zero_rejected() {
        let diffs = [0.0; 8];
        assert!(matches!(
            wilcoxon_signed_rank(&diffs, Alternative::Greater),
            Err(Error::TooFewPairs { n: 0 })
        ));
    }

    #[test]
    fn wilcoxon_zero_dropping_counted() {
        let diffs = [0.0, 1.0, 2.0, 0.0, 3.0, 4.0, 5.0, 6.0];
        let t = wilcoxon_signed_rank(&diffs, Alternative::Greater).unwrap();
        assert_eq!(t.zeros_dropped, 2);
        assert_eq!(t.n_used, 6);
    }

    #[test]
    fn relative_improvement_examples() {
        assert_eq!(relative_improvement(&[0.5], &[0.5]).unwrap(), 0.0);
        assert!((relative_improvement(&[0.6], &[0.5]).unwrap() - 20.0).abs() < 1e-9);
        assert!((relative_improvement(&[0.3, 0.6], &[0.2, 0.5]).unwrap() - 35.0).abs() < 1e-9);
        assert!(matches!(
            relative_improvement(&[0.1], &[0.0]),
            Err(Error::ZeroBaseline { index: 0 })
        ));
    }

    #[test]
    fn t_interval_examples() {
        let (mean, lo, hi) = t_confidence_interval(&[1.0, 2.0, 3.0], 0.95).unwrap();
        assert_eq!(mean, 2.0);
        let half = (hi - lo) / 2.0;
        assert!((half - 2.4841).abs() < 1e-3, "half-width {half}");
        // Constant samples: zero-width interval.
        let (m, l, h) = t_confidence_interval(&[4.0, 4.0, 4.0], 0.95).unwrap();
        assert_eq!((m, l, h), (4.0, 4.0, 4.0));
    }

    #[test]
    fn t_interval_width_scales_inverse_sqrt_n() {
        // Construct samples with identical sample standard deviation s = 1
        // at n = 4 and n = 16; widths must scale with sqrt(freedom quantile
        // adjustment) / sqrt(n).
        let four = [-1.5f64, -0.5, 0.5, 1.5];
        let s4: f64 = (four.iter().map(|x| x * x).sum::<f64>() / 3.0).sqrt();
        let scaled4: Vec<f64> = four.iter().map(|x| x / s4).collect();
        let mut sixteen = Vec::new();
        for i in 0..16 {
            sixteen.push(i as f64);
        }
        let m16 = sixteen.iter().sum::<f64>() / 16.0;
        let s16 = (sixteen.iter().map(|x| (x - m16).powi(2)).sum::<f64>() / 15.0).sqrt();
        let scaled16: Vec<f64> = sixteen.iter().map(|x| x / s16).collect();
        let (_, lo4, hi4) = t_confidence_interval(&scaled4, 0.95).unwrap();
        let (_, lo16, hi16) = t_confidence_interval(&scaled16, 0.95).unwrap();
        let t4 = StudentsT::new(0.0, 1.0, 3.0).unwrap().inverse_cdf(0.975);
        let t16 = StudentsT::new(0.0, 1.0, 15.0).unwrap().inverse_cdf(0.975);
        let expected_ratio = (t4 / 2.0) / (t16 / 4.0);
        let actual_ratio = (hi4 - lo4) / (hi16 - lo16);
        assert!((actual_ratio - expected_ratio).abs() < 1e-9);
    }

    #[test]
    fn t_quantile_matches_table() {
        let t = StudentsT::new(0.0, 1.0, 2.0).unwrap().inverse_cdf(0.975);
        assert!((t - 4.302652729911275).abs() < 1e-6, "t = {t}");
    }

    #[test]
    fn average_ranks_with_ties() {
        assert_eq!(average_ranks(&[3.0, 1.0, 2.0]), vec![3.0, 1.0, 2.0]);
        assert_eq!(average_ranks(&[1.0, 1.0, 2.0]), vec![1.5, 1.5, 3.0]);
    }
}
