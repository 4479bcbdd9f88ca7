//! The K-Sil refinement loop: initialization, silhouette-weighted centroid
//! updates, empty-cluster repair, convergence, best-partition retention and
//! sensitivity auto-tuning. The same driver also powers the unweighted and
//! statically weighted baselines so that every algorithm shares
//! initialization, tie-breaking, repair and termination behavior.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{InitMethod, KsilConfig, Objective, Sensitivity, WeightScheme};
use crate::dataset::{euclidean, squared_distance, Dataset};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::result::{IterationRecord, RunResult, Termination};
use crate::silhouette::{
    approx_silhouette_apr, exact_silhouette, sample_indices, ClusterStats, SilhouetteReport,
};
use crate::weighting::{median, weights_for, SchemeParams};

/// Donor-cluster choice when repairing an empty cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReinitStrategy {
    /// Take the point farthest from the centroid of the largest cluster.
    Largest,
    /// Take it from the cluster with the highest mean squared deviation.
    Variance,
}

/// Which silhouette computation feeds the loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Exact,
    Apr,
}

/// Snapshot of one loop iteration, handed to observers.
#[derive(Debug, Clone)]
pub struct IterationState {
    pub iteration: usize,
    pub partition: Partition,
    pub stats: ClusterStats,
    pub evaluated_indices: Vec<usize>,
    pub scores: Vec<f64>,
    pub weights: Vec<f64>,
    pub objective: f64,
    pub weighted_objective: f64,
    pub mean_movement: f64,
}

/// Per-cluster core/periphery split around the median silhouette.
///
/// For each cluster: the median score of its evaluated points, the point
/// indices scoring strictly above it (core), and the rest (periphery).
#[derive(Debug, Clone, PartialEq)]
pub struct CorePeripherySplit {
    pub medians: Vec<f64>,
    pub core: Vec<Vec<usize>>,
    pub periphery: Vec<Vec<usize>>,
}

/// Choose k seeds, assign points to the nearest seed, and recompute the
/// centroids as cluster means: exactly one k-means iteration. Clusters left
/// empty by the seeding are repaired before returning.
pub fn init_partition(
    data: &Dataset,
    k: usize,
    method: InitMethod,
    rng: &mut ChaCha8Rng,
) -> Result<Partition> {
    let n = data.n();
    if k < 2 {
        return Err(Error::KTooSmall { k });
    }
    if k >= n {
        return Err(Error::KTooLarge { k, n });
    }
    let seeds = match method {
        InitMethod::Random => rand::seq::index::sample(rng, n, k)
            .into_iter()
            .map(|i| data.point(i).to_vec())
            .collect::<Vec<_>>(),
        InitMethod::KMeansPlusPlus => d_squared_seeds(data, k, rng),
    };
    let assignments = assign_labels(data, &seeds);
    let d = data.dim();
    let mut sizes = vec![0usize; k];
    let mut means = vec![vec![0.0; d]; k];
    for (i, &c) in assignments.iter().enumerate() {
        sizes[c] += 1;
        for (m, v) in means[c].iter_mut().zip(data.point(i)) {
            *m += v;
        }
    }
    for (j, mean) in means.iter_mut().enumerate() {
        if sizes[j] > 0 {
            for v in mean.iter_mut() {
                *v /= sizes[j] as f64;
            }
        } else {
            // Keep the seed as a placeholder centroid; repaired below.
            mean.clone_from(&seeds[j]);
        }
    }
    let part = Partition::new(assignments, means);
    if sizes.contains(&0) {
        reinit_empty(data, part, ReinitStrategy::Largest)
    } else {
        Ok(part)
    }
}

/// k-means++ D^2 seeding: the first seed is uniform, each further seed is a
/// data point drawn with probability proportional to its squared distance
/// to the nearest already-chosen seed.
fn d_squared_seeds(data: &Dataset, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = data.n();
    let first = rng.random_range(0..n);
    let mut chosen = vec![first];
    let mut d2: Vec<f64> = (0..n)
        .map(|i| squared_distance(data.point(i), data.point(first)))
        .collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random_range(0.0..total);
            let mut cum = 0.0;
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                cum += w;
                if cum > target {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            // Every point coincides with a chosen seed; take any unchosen one.
            let unchosen: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            unchosen[rng.random_range(0..unchosen.len())]
        };
        chosen.push(next);
        for (i, slot) in d2.iter_mut().enumerate() {
            let d = squared_distance(data.point(i), data.point(next));
            if d < *slot {
                *slot = d;
            }
        }
    }
    chosen.into_iter().map(|i| data.point(i).to_vec()).collect()
}

/// Nearest-centroid assignment; distance ties go to the lowest cluster index.
pub fn assign_labels(data: &Dataset, centroids: &[Vec<f64>]) -> Vec<usize> {
    (0..data.n())
        .into_par_iter()
        .map(|i| {
            let x = data.point(i);
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (j, c) in centroids.iter().enumerate() {
                let d = squared_distance(x, c);
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Weight-normalized mean of each cluster's scored points.
///
/// Unscored points do not contribute; a cluster whose scored points carry no
/// weight is an error.
pub fn weighted_centroid_update(
    data: &Dataset,
    part: &Partition,
    evaluated: &[usize],
    weights: &[f64],
) -> Result<Vec<Vec<f64>>> {
    debug_assert_eq!(evaluated.len(), weights.len());
    let d = data.dim();
    let mut acc = vec![vec![0.0; d]; part.k];
    let mut total = vec![0.0; part.k];
    for (&i, &w) in evaluated.iter().zip(weights) {
        let c = part.assignments[i];
        total[c] += w;
        for (a, v) in acc[c].iter_mut().zip(data.point(i)) {
            *a += w * v;
        }
    }
    for (j, cluster_acc) in acc.iter_mut().enumerate() {
        if total[j] > 0.0 {
            for v in cluster_acc.iter_mut() {
                *v /= total[j];
            }
        } else {
            return Err(Error::ZeroClusterWeight { cluster: j });
        }
    }
    Ok(acc)
}

/// Repair empty clusters by donating, for each empty cluster in ascending
/// index order, the donor point farthest from the donor cluster's centroid.
/// The donor is the largest cluster (or the highest-variance one), ties
/// going to the lower cluster index; the donated point becomes the empty
/// cluster's centroid. A partition without empty clusters is returned
/// unchanged.
pub fn reinit_empty(
    data: &Dataset,
    part: Partition,
    strategy: ReinitStrategy,
) -> Result<Partition> {
    let n = part.n();
    if part.k > n {
        return Err(Error::IrreparablePartition { k: part.k, n });
    }
    let mut members = part.members_by_cluster();
    if members.iter().all(|m| !m.is_empty()) {
        return Ok(part);
    }
    let mut assignments = part.assignments;
    let mut centroids = part.centroids;
    let empties: Vec<usize> = (0..part.k).filter(|&j| members[j].is_empty()).collect();
    for j in empties {
        let donor = match strategy {
            ReinitStrategy::Largest => (0..part.k)
                .filter(|&h| members[h].len() >= 2)
                .max_by(|&a, &b| members[a].len().cmp(&members[b].len()).then(b.cmp(&a))),
            ReinitStrategy::Variance => (0..part.k)
                .filter(|&h| members[h].len() >= 2)
                .map(|h| {
                    let msd = members[h]
                        .iter()
                        .map(|&p| squared_distance(data.point(p), &centroids[h]))
                        .sum::<f64>()
                        / members[h].len() as f64;
                    (h, msd)
                })
                .fold(None::<(usize, f64)>, |best, (h, msd)| match best {
                    Some((bh, bmsd)) if bmsd >= msd => Some((bh, bmsd)),
                    _ => Some((h, msd)),
                })
                .map(|(h, _)| h),
        };
        let donor = donor.ok_or(Error::IrreparablePartition { k: part.k, n })?;
        let mut far_pos = 0;
        let mut far_d = f64::NEG_INFINITY;
        for (pos, &p) in members[donor].iter().enumerate() {
            let d = squared_distance(data.point(p), &centroids[donor]);
            if d > far_d {
                far_d = d;
                far_pos = pos;
            }
        }
        let point = members[donor].remove(far_pos);
        centroids[j] = data.point(point).to_vec();
        assignments[point] = j;
        members[j] = vec![point];
    }
    Ok(Partition::new(assignments, centroids))
}

/// Weighted silhouette sum over aligned weight/score pairs. A diagnostic
/// only; never used for retention or termination.
pub fn compute_objective_f(weights: &[f64], scores: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), scores.len());
    weights.iter().zip(scores).map(|(w, s)| w * s).sum()
}

/// Split each cluster's evaluated points into core (score strictly above
/// the cluster median) and periphery (the rest).
pub fn core_periphery_split(
    part: &Partition,
    evaluated: &[usize],
    scores: &[f64],
) -> CorePeripherySplit {
    debug_assert_eq!(evaluated.len(), scores.len());
    let mut by_cluster: Vec<Vec<(usize, f64)>> = vec![Vec::new(); part.k];
    for (&i, &s) in evaluated.iter().zip(scores) {
        by_cluster[part.assignments[i]].push((i, s));
    }
    let mut medians = Vec::with_capacity(part.k);
    let mut core = Vec::with_capacity(part.k);
    let mut periphery = Vec::with_capacity(part.k);
    for cluster in by_cluster {
        if cluster.is_empty() {
            medians.push(f64::NAN);
            core.push(Vec::new());
            periphery.push(Vec::new());
            continue;
        }
        let values: Vec<f64> = cluster.iter().map(|(_, s)| *s).collect();
        let m = median(&values);
        let mut h = Vec::new();
        let mut l = Vec::new();
        for (i, s) in cluster {
            if s > m {
                h.push(i);
            } else {
                l.push(i);
            }
        }
        medians.push(m);
        core.push(h);
        periphery.push(l);
    }
    CorePeripherySplit {
        medians,
        core,
        periphery,
    }
}

/// How the loop derives per-point weights each iteration.
#[derive(Clone, Copy)]
pub(crate) enum WeightPlan<'a> {
    /// Fixed per-point weights, indexed by point. Unit weights give
    /// standard k-means updates.
    Static(&'a [f64]),
    /// Silhouette-driven weights recomputed per cluster each iteration.
    Silhouette {
        scheme: WeightScheme,
        params: SchemeParams,
    },
}

#[derive(Clone, Copy)]
pub(crate) struct LoopSpec<'a> {
    pub k: usize,
    pub objective: Objective,
    pub eval_mode: EvalMode,
    pub sample_size: Option<usize>,
    pub tau: f64,
    pub max_iter: usize,
    pub weights: WeightPlan<'a>,
    pub reinit: ReinitStrategy,
}

struct Evaluation {
    indices: Vec<usize>,
    scores: Vec<f64>,
    objective: f64,
}

fn evaluate(
    data: &Dataset,
    part: &Partition,
    spec: &LoopSpec,
    rng: &mut ChaCha8Rng,
) -> Result<Evaluation> {
    let n = data.n();
    let indices = match spec.sample_size {
        Some(m) if m < n => sample_indices(part, m, spec.objective, rng)?,
        _ => (0..n).collect(),
    };
    let report: SilhouetteReport = match spec.eval_mode {
        EvalMode::Exact => exact_silhouette(data, part, &indices)?,
        EvalMode::Apr => {
            let stats = ClusterStats::compute(data, part);
            approx_silhouette_apr(data, &stats, part, &indices)?
        }
    };
    let objective = report.objective(spec.objective);
    Ok(Evaluation {
        indices,
        scores: report.per_point,
        objective,
    })
}

fn derive_weights(part: &Partition, eval: &Evaluation, plan: &WeightPlan) -> Vec<f64> {
    match plan {
        WeightPlan::Static(w) => eval.indices.iter().map(|&i| w[i]).collect(),
        WeightPlan::Silhouette { scheme, params } => {
            let mut by_cluster: Vec<Vec<(usize, f64)>> = vec![Vec::new(); part.k];
            for (pos, (&i, &s)) in eval.indices.iter().zip(&eval.scores).enumerate() {
                by_cluster[part.assignments[i]].push((pos, s));
            }
            let mut out = vec![0.0; eval.indices.len()];
            for cluster in by_cluster {
                if cluster.is_empty() {
                    continue;
                }
                let scores: Vec<f64> = cluster.iter().map(|(_, s)| *s).collect();
                let wv = weights_for(*scheme, &scores, *params);
                for ((pos, _), w) in cluster.into_iter().zip(wv.weights) {
                    out[pos] = w;
                }
            }
            out
        }
    }
}

/// The shared refinement driver. `trace[0]` records the evaluation of the
/// initial partition; each following record one refinement step. The
/// partition with the highest recorded objective is retained.
pub(crate) fn run_loop(
    data: &Dataset,
    spec: &LoopSpec,
    init: Partition,
    rng: &mut ChaCha8Rng,
    mut observer: Option<&mut dyn FnMut(&IterationState)>,
) -> Result<RunResult> {
    let mut part = init;
    let mut eval = evaluate(data, &part, spec, rng)?;
    let mut weights = derive_weights(&part, &eval, &spec.weights);
    let mut trace = vec![IterationRecord {
        objective: eval.objective,
        weighted_objective: compute_objective_f(&weights, &eval.scores),
        mean_movement: 0.0,
    }];
    let mut best_partition = part.clone();
    let mut best_objective = eval.objective;
    if let Some(obs) = observer.as_mut() {
        obs(&snapshot(
            data,
            0,
            &part,
            &eval,
            &weights,
            trace.last().unwrap(),
        ));
    }
    let mut terminated_by = Termination::MaxIter;
    for t in 1..=spec.max_iter {
        let new_centroids = weighted_centroid_update(data, &part, &eval.indices, &weights)?;
        let assignments = assign_labels(data, &new_centroids);
        let candidate = Partition::new(assignments, new_centroids);
        let repaired = reinit_empty(data, candidate, spec.reinit)?;
        let movement = part
            .centroids
            .iter()
            .zip(&repaired.centroids)
            .map(|(a, b)| euclidean(a, b))
            .sum::<f64>()
            / spec.k as f64;
        part = repaired;
        eval = evaluate(data, &part, spec, rng)?;
        weights = derive_weights(&part, &eval, &spec.weights);
        trace.push(IterationRecord {
            objective: eval.objective,
            weighted_objective: compute_objective_f(&weights, &eval.scores),
            mean_movement: movement,
        });
        if eval.objective > best_objective {
            best_objective = eval.objective;
            best_partition = part.clone();
        }
        if let Some(obs) = observer.as_mut() {
            obs(&snapshot(
                data,
                t,
                &part,
                &eval,
                &weights,
                trace.last().unwrap(),
            ));
        }
        if movement < spec.tau {
            terminated_by = Termination::Threshold;
            break;
        }
    }
    Ok(RunResult {
        best_partition,
        best_objective,
        iterations_run: trace.len(),
        trace,
        terminated_by,
    })
}

fn snapshot(
    data: &Dataset,
    iteration: usize,
    part: &Partition,
    eval: &Evaluation,
    weights: &[f64],
    record: &IterationRecord,
) -> IterationState {
    IterationState {
        iteration,
        partition: part.clone(),
        stats: ClusterStats::compute(data, part),
        evaluated_indices: eval.indices.clone(),
        scores: eval.scores.clone(),
        weights: weights.to_vec(),
        objective: record.objective,
        weighted_objective: record.weighted_objective,
        mean_movement: record.mean_movement,
    }
}

fn loop_spec<'a>(cfg: &KsilConfig, p: f64) -> Result<LoopSpec<'a>> {
    Ok(LoopSpec {
        k: cfg.k,
        objective: cfg.objective,
        eval_mode: if cfg.approximate {
            EvalMode::Apr
        } else {
            EvalMode::Exact
        },
        sample_size: cfg.sample_size,
        tau: cfg.tau,
        max_iter: cfg.max_iter,
        weights: WeightPlan::Silhouette {
            scheme: cfg.scheme,
            params: SchemeParams::new(p, cfg.epsilon)?,
        },
        reinit: ReinitStrategy::Largest,
    })
}

fn run_fixed(
    data: &Dataset,
    cfg: &KsilConfig,
    p: f64,
    observer: Option<&mut dyn FnMut(&IterationState)>,
) -> Result<RunResult> {
    let spec = loop_spec(cfg, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let init = init_partition(data, cfg.k, cfg.init, &mut rng)?;
    run_loop(data, &spec, init, &mut rng, observer)
}

/// Run K-Sil. With a fixed sensitivity this is one refinement run; with
/// auto sensitivity the grid is searched and the best run returned.
pub fn run_ksil(data: &Dataset, cfg: &KsilConfig) -> Result<RunResult> {
    cfg.validate(data)?;
    match &cfg.sensitivity {
        Sensitivity::Fixed(p) => run_fixed(data, cfg, *p, None),
        Sensitivity::Auto(_) => auto_tune_p(data, cfg).map(|(_, run)| run),
    }
}

/// Like [`run_ksil`] but reports every iteration to `observer`. Requires a
/// fixed sensitivity.
pub fn run_ksil_observed(
    data: &Dataset,
    cfg: &KsilConfig,
    observer: &mut dyn FnMut(&IterationState),
) -> Result<RunResult> {
    cfg.validate(data)?;
    match &cfg.sensitivity {
        Sensitivity::Fixed(p) => run_fixed(data, cfg, *p, Some(observer)),
        Sensitivity::Auto(_) => Err(Error::InvalidConfig(
            "observed runs require a fixed sensitivity".into(),
        )),
    }
}

/// Grid-search the weight sensitivity: one run per candidate from the same
/// seed (hence the same initialization), returning the run with the highest
/// best objective. Ties go to the smaller p. Candidates run concurrently;
/// the winner equals the sequential choice.
pub fn auto_tune_p(data: &Dataset, cfg: &KsilConfig) -> Result<(f64, RunResult)> {
    cfg.validate(data)?;
    let grid = match &cfg.sensitivity {
        Sensitivity::Auto(grid) => grid.clone(),
        Sensitivity::Fixed(p) => vec![*p],
    };
    let runs: Vec<(f64, Result<RunResult>)> = grid
        .par_iter()
        .map(|&p| (p, run_fixed(data, cfg, p, None)))
        .collect();
    let mut best: Option<(f64, RunResult)> = None;
    for (p, run) in runs {
        let run = run?;
        best = match best {
            None => Some((p, run)),
            Some((bp, brun)) => {
                if run.best_objective > brun.best_objective
                    || (run.best_objective == brun.best_objective && p < bp)
                {
                    Some((p, run))
                } else {
                    Some((bp, brun))
                }
            }
        };
    }
    Ok(best.expect("non-empty grid"))
}
