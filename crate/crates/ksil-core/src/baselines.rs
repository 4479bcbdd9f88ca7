//! Comparison algorithms sharing the K-Sil loop machinery: standard
//! k-means, density-weighted k-means, and LOF-weighted k-means. All three
//! use the same initialization, tie-breaking, empty-cluster repair and
//! termination as the K-Sil loop, and record the exact silhouette objective
//! per iteration so the best-scoring partition is retained.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{InitMethod, Objective};
use crate::dataset::{euclidean, Dataset};
use crate::engine::{init_partition, run_loop, EvalMode, LoopSpec, ReinitStrategy, WeightPlan};
use crate::error::{Error, Result};
use crate::result::RunResult;

/// Neighbor count and stability constant for the density and LOF weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborhoodParams {
    pub h: usize,
    pub epsilon: f64,
}

impl NeighborhoodParams {
    pub fn new(h: usize) -> Self {
        NeighborhoodParams { h, epsilon: 1e-8 }
    }
}

/// Which static weighting drives the weighted baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineWeighting {
    Density,
    Lof,
}

/// Standard k-means (Lloyd iterations) through the shared loop.
pub fn run_kmeans(
    data: &Dataset,
    k: usize,
    init: InitMethod,
    objective: Objective,
    tau: f64,
    max_iter: usize,
    seed: u64,
) -> Result<RunResult> {
    let weights = vec![1.0; data.n()];
    run_weighted_kmeans(data, k, &weights, init, objective, tau, max_iter, seed)
}

/// Like [`run_kmeans`] but reporting every iteration to `observer`.
#[allow(clippy::too_many_arguments)]
pub fn run_kmeans_observed(
    data: &Dataset,
    k: usize,
    init: InitMethod,
    objective: Objective,
    tau: f64,
    max_iter: usize,
    seed: u64,
    observer: &mut dyn FnMut(&crate::engine::IterationState),
) -> Result<RunResult> {
    let weights = vec![1.0; data.n()];
    run_weighted_loop(
        data,
        k,
        &weights,
        init,
        objective,
        tau,
        max_iter,
        seed,
        Some(observer),
    )
}

/// Lloyd loop with fixed per-point weights in the centroid updates.
#[allow(clippy::too_many_arguments)]
pub fn run_weighted_kmeans(
    data: &Dataset,
    k: usize,
    weights: &[f64],
    init: InitMethod,
    objective: Objective,
    tau: f64,
    max_iter: usize,
    seed: u64,
) -> Result<RunResult> {
    run_weighted_loop(data, k, weights, init, objective, tau, max_iter, seed, None)
}

#[allow(clippy::too_many_arguments)]
fn run_weighted_loop(
    data: &Dataset,
    k: usize,
    weights: &[f64],
    init: InitMethod,
    objective: Objective,
    tau: f64,
    max_iter: usize,
    seed: u64,
    observer: Option<&mut dyn FnMut(&crate::engine::IterationState)>,
) -> Result<RunResult> {
    if weights.len() != data.n() {
        return Err(Error::LengthMismatch {
            left: weights.len(),
            right: data.n(),
        });
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidConfig(
            "weights must be finite and nonnegative".into(),
        ));
    }
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::InvalidConfig("tau must be > 0".into()));
    }
    if max_iter < 1 {
        return Err(Error::InvalidConfig("max_iter must be >= 1".into()));
    }
    let spec = LoopSpec {
        k,
        objective,
        eval_mode: EvalMode::Exact,
        sample_size: None,
        tau,
        max_iter,
        weights: WeightPlan::Static(weights),
        reinit: ReinitStrategy::Largest,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial = init_partition(data, k, init, &mut rng)?;
    run_loop(data, &spec, initial, &mut rng, observer)
}

/// Inverse mean distance to the h nearest neighbors (excluding the point
/// itself): points in dense regions get larger weights.
pub fn density_weights(data: &Dataset, params: NeighborhoodParams) -> Result<Vec<f64>> {
    let n = data.n();
    if params.h == 0 || params.h >= n {
        return Err(Error::InvalidNeighborhood { h: params.h, n });
    }
    let weights = (0..n)
        .into_par_iter()
        .map(|i| {
            let dists = neighbor_distances(data, i, params.h);
            let mean = dists.iter().map(|(_, d)| d).sum::<f64>() / params.h as f64;
            1.0 / (mean + params.epsilon)
        })
        .collect();
    Ok(weights)
}

/// Local Outlier Factor weights: w = 1 / max(LOF, 1), so inliers keep
/// weight close to 1 and outliers are downweighted.
pub fn lof_weights(data: &Dataset, params: NeighborhoodParams) -> Result<Vec<f64>> {
    let n = data.n();
    let h = params.h;
    if h == 0 || h >= n {
        return Err(Error::InvalidNeighborhood { h, n });
    }
    let neighbors: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| neighbor_distances(data, i, h))
        .collect();
    let k_dist: Vec<f64> = neighbors.iter().map(|nb| nb[h - 1].1).collect();
    // Local reachability density: inverse mean reachability distance.
    let lrd: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mean_reach = neighbors[i]
                .iter()
                .map(|&(j, d)| d.max(k_dist[j]))
                .sum::<f64>()
                / h as f64;
            1.0 / (mean_reach + params.epsilon)
        })
        .collect();
    let weights = (0..n)
        .into_par_iter()
        .map(|i| {
            let lof = neighbors[i].iter().map(|&(j, _)| lrd[j]).sum::<f64>() / h as f64 / lrd[i];
            1.0 / lof.max(1.0)
        })
        .collect();
    Ok(weights)
}

/// The h nearest neighbors of point `i` (excluding `i`), nearest first,
/// distance ties broken by lower index.
fn neighbor_distances(data: &Dataset, i: usize, h: usize) -> Vec<(usize, f64)> {
    let mut dists: Vec<(usize, f64)> = (0..data.n())
        .filter(|&j| j != i)
        .map(|j| (j, euclidean(data.point(i), data.point(j))))
        .collect();
    dists.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite").then(a.0.cmp(&b.0)));
    dists.truncate(h);
    dists
}

/// Grid-search the neighborhood size of a weighted baseline, scoring each
/// candidate run by its exact silhouette objective. Ties go to the smaller
/// h; every candidate starts from the same seed.
#[allow(clippy::too_many_arguments)]
pub fn tune_neighborhood(
    data: &Dataset,
    k: usize,
    algo: BaselineWeighting,
    objective: Objective,
    grid: &[usize],
    init: InitMethod,
    tau: f64,
    max_iter: usize,
    seed: u64,
) -> Result<(usize, RunResult)> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("neighborhood grid is empty".into()));
    }
    let runs: Vec<(usize, Result<RunResult>)> = grid
        .par_iter()
        .map(|&h| {
            let run = baseline_weights(data, algo, NeighborhoodParams::new(h)).and_then(|w| {
                run_weighted_kmeans(data, k, &w, init, objective, tau, max_iter, seed)
            });
            (h, run)
        })
        .collect();
    let mut best: Option<(usize, RunResult)> = None;
    for (h, run) in runs {
        let run = run?;
        best = match best {
            None => Some((h, run)),
            Some((bh, brun)) => {
                if run.best_objective > brun.best_objective
                    || (run.best_objective == brun.best_objective && h < bh)
                {
                    Some((h, run))
                } else {
                    Some((bh, brun))
                }
            }
        };
    }
    Ok(best.expect("non-empty grid"))
}

pub fn baseline_weights(
    data: &Dataset,
    algo: BaselineWeighting,
    params: NeighborhoodParams,
) -> Result<Vec<f64>> {
    match algo {
        BaselineWeighting::Density => density_weights(data, params),
        BaselineWeighting::Lof => lof_weights(data, params),
    }
}

/// Default neighborhood grid for [`tune_neighborhood`].
pub const DEFAULT_H_GRID: [usize; 6] = [3, 5, 10, 15, 20, 30];

/// Fixed neighbor counts used for external-validation (NMI) runs.
pub const NMI_LOF_NEIGHBORS: usize = 5;
pub const NMI_DENSITY_NEIGHBORS: usize = 10;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DEFAULT_TAU;
    use crate::dataset::validate_dataset;

    fn points_1d(xs: &[f64]) -> Dataset {
        validate_dataset(xs.iter().map(|&x| vec![x]).collect(), None, "t").unwrap()
    }

    #[test]
    fn kmeans_recovers_two_blobs() {
        let data = points_1d(&[0.0, 1.0, 9.0, 10.0]);
        let run = run_kmeans(
            &data,
            2,
            InitMethod::KMeansPlusPlus,
            Objective::Macro,
            DEFAULT_TAU,
            100,
            3,
        )
        .unwrap();
        run.best_partition.validate(4, 1).unwrap();
        let a = run.best_partition.assignments[0];
        assert_eq!(run.best_partition.assignments[1], a);
        assert_ne!(run.best_partition.assignments[2], a);
        assert_eq!(
            run.best_partition.assignments[2],
            run.best_partition.assignments[3]
        );
    }

    #[test]
    fn kmeans_rejects_k_too_small() {
        let data = points_1d(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            run_kmeans(
                &data,
                1,
                InitMethod::Random,
                Objective::Macro,
                DEFAULT_TAU,
                10,
                0
            ),
            Err(Error::KTooSmall { k: 1 })
        ));
    }

    #[test]
    fn kmeans_deterministic() {
        let data = points_1d(&[0.0, 0.5, 4.0, 4.5, 9.0, 9.5, 13.0]);
        let a = run_kmeans(
            &data,
            3,
            InitMethod::Random,
            Objective::Micro,
            DEFAULT_TAU,
            50,
            9,
        )
        .unwrap();
        let b = run_kmeans(
            &data,
            3,
            InitMethod::Random,
            Objective::Micro,
            DEFAULT_TAU,
            50,
            9,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unit_weighted_matches_kmeans_bitwise() {
        let data = points_1d(&[0.0, 0.3, 0.9, 5.0, 5.4, 6.1, 11.0, 11.8]);
        let unit = vec![1.0; 8];
        let a = run_kmeans(
            &data,
            3,
            InitMethod::KMeansPlusPlus,
            Objective::Macro,
            DEFAULT_TAU,
            100,
            21,
        )
        .unwrap();
        let b = run_weighted_kmeans(
            &data,
            3,
            &unit,
            InitMethod::KMeansPlusPlus,
            Objective::Macro,
            DEFAULT_TAU,
            100,
            21,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn density_weight_hand_value() {
        let data = points_1d(&[0.0, 1.0, 2.0, 10.0]);
        let params = NeighborhoodParams::new(2);
        let w = density_weights(&data, params).unwrap();
        // x = 0: neighbors {1, 2}, mean distance 1.5.
        assert!((w[0] - 1.0 / (1.5 + params.epsilon)).abs() < 1e-12);
        // Dense-region point outweighs the isolated one.
        assert!(w[1] > w[3]);
    }

    #[test]
    fn density_duplicate_point_stays_finite() {
        let data = points_1d(&[3.0, 3.0, 8.0]);
        let params = NeighborhoodParams::new(1);
        let w = density_weights(&data, params).unwrap();
        assert!((w[0] - 1.0 / params.epsilon).abs() < 1e-6);
        assert!(w.iter().all(|w| w.is_finite()));
    }

    #[test]
    fn lof_grid_interior_near_one_outlier_downweighted() {
        // 5x5 grid plus a far outlier.
        let mut pts = Vec::new();
        for x in 0..5 {
            for y in 0..5 {
                pts.push(vec![x as f64, y as f64]);
            }
        }
        pts.push(vec![40.0, 40.0]);
        let data = validate_dataset(pts, None, "grid").unwrap();
        let w = lof_weights(&data, NeighborhoodParams::new(4)).unwrap();
        // Center of the grid (2, 2) is index 12.
        assert!((w[12] - 1.0).abs() < 0.05, "interior weight {}", w[12]);
        assert!(w[25] < 0.5, "outlier weight {}", w[25]);
    }

    #[test]
    fn lof_identical_points_all_unit() {
        let data = points_1d(&[2.0, 2.0, 2.0, 2.0]);
        let w = lof_weights(&data, NeighborhoodParams::new(2)).unwrap();
        assert!(w.iter().all(|&w| (w - 1.0).abs() < 1e-9), "{w:?}");
    }

    #[test]
    fn zero_weight_outlier_excluded_from_centroid() {
        use crate::engine::weighted_centroid_update;
        use crate::partition::Partition;
        let data = points_1d(&[0.0, 1.0, 2.0, 100.0]);
        let part = Partition::new(vec![0, 0, 0, 0], vec![vec![25.75]]);
        let centroids =
            weighted_centroid_update(&data, &part, &[0, 1, 2, 3], &[1.0, 1.0, 1.0, 0.0]).unwrap();
        assert!((centroids[0][0] - 1.0).abs() < 1e-12);
        // A density-weighted run still pulls the blob cluster's centroid
        // closer to the blob mean than the unweighted mean of its members.
        let data = points_1d(&[0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 30.0]);
        let w = density_weights(&data, NeighborhoodParams::new(3)).unwrap();
        let part = Partition::new(vec![0; 11], vec![vec![3.6]]);
        let weighted =
            weighted_centroid_update(&data, &part, &(0..11).collect::<Vec<_>>(), &w).unwrap();
        let unweighted_mean = data.points().iter().map(|p| p[0]).sum::<f64>() / 11.0;
        let blob_mean = 0.9;
        assert!((weighted[0][0] - blob_mean).abs() < (unweighted_mean - blob_mean).abs());
    }

    #[test]
    fn tune_matches_exhaustive() {
        let data = points_1d(&[
            0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 7.0, 7.2, 7.4, 7.6, 7.8, 8.0, 30.0,
        ]);
        let grid = [2, 5];
        let (best_h, best_run) = tune_neighborhood(
            &data,
            2,
            BaselineWeighting::Density,
            Objective::Macro,
            &grid,
            InitMethod::KMeansPlusPlus,
            DEFAULT_TAU,
            100,
            4,
        )
        .unwrap();
        let mut expect: Option<(usize, f64)> = None;
        for &h in &grid {
            let w = density_weights(&data, NeighborhoodParams::new(h)).unwrap();
            let run = run_weighted_kmeans(
                &data,
                2,
                &w,
                InitMethod::KMeansPlusPlus,
                Objective::Macro,
                DEFAULT_TAU,
                100,
                4,
            )
            .unwrap();
            expect = match expect {
                None => Some((h, run.best_objective)),
                Some((bh, bo)) => {
                    if run.best_objective > bo {
                        Some((h, run.best_objective))
                    } else {
                        Some((bh, bo))
                    }
                }
            };
        }
        let (eh, eo) = expect.unwrap();
        assert_eq!(best_h, eh);
        assert_eq!(best_run.best_objective, eo);
    }

    #[test]
    fn tune_singleton_grid() {
        let data = points_1d(&[0.0, 0.5, 1.0, 9.0, 9.5, 10.0]);
        let (h, _) = tune_neighborhood(
            &data,
            2,
            BaselineWeighting::Lof,
            Objective::Micro,
            &[3],
            InitMethod::Random,
            DEFAULT_TAU,
            50,
            1,
        )
        .unwrap();
        assert_eq!(h, 3);
    }

    #[test]
    fn weights_permutation_equivariant() {
        let xs = [0.0, 1.0, 3.5, 4.0, 9.0, 2.2];
        let perm = [3usize, 0, 5, 1, 4, 2];
        let permuted: Vec<f64> = perm.iter().map(|&i| xs[i]).collect();
        let base = points_1d(&xs);
        let shuffled = points_1d(&permuted);
        let params = NeighborhoodParams::new(2);
        for algo in [BaselineWeighting::Density, BaselineWeighting::Lof] {
            let w = baseline_weights(&base, algo, params).unwrap();
            let wp = baseline_weights(&shuffled, algo, params).unwrap();
            for (pos, &src) in perm.iter().enumerate() {
                assert!((wp[pos] - w[src]).abs() < 1e-12, "{algo:?}");
            }
        }
    }

    #[test]
    fn weights_translation_invariant() {
        let base = points_1d(&[0.0, 1.0, 3.5, 4.0, 9.0]);
        let shifted = points_1d(&[100.0, 101.0, 103.5, 104.0, 109.0]);
        let params = NeighborhoodParams::new(2);
        for algo in [BaselineWeighting::Density, BaselineWeighting::Lof] {
            let a = baseline_weights(&base, algo, params).unwrap();
            let b = baseline_weights(&shifted, algo, params).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }
}
