//! Exact silhouette scores, the refined approximation (ApR) built from
//! cluster sizes, centroids and within-cluster sums of squares, the
//! centroid-distance-only approximation (ApS), aggregation into micro /
//! macro / combined objectives, and objective-aware sampling.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Objective;
use crate::dataset::{euclidean, squared_distance, Dataset};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// How a set of silhouette scores was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SilhouetteMode {
    Exact,
    Apr,
    Aps,
}

/// Per-point silhouette scores over an evaluated index set plus aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SilhouetteReport {
    /// Scores aligned with `evaluated_indices`.
    pub per_point: Vec<f64>,
    /// Which points were scored, ascending.
    pub evaluated_indices: Vec<usize>,
    pub micro: f64,
    pub macro_avg: f64,
    pub combined: f64,
    pub mode: SilhouetteMode,
}

impl SilhouetteReport {
    pub fn objective(&self, objective: Objective) -> f64 {
        match objective {
            Objective::Macro => self.macro_avg,
            Objective::Micro => self.micro,
            Objective::Combined { alpha } => alpha * self.micro + (1.0 - alpha) * self.macro_avg,
        }
    }
}

/// Per-cluster size, centroid (mean of current members) and within-cluster
/// sum of squares.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterStats {
    pub sizes: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub ss: Vec<f64>,
}

impl ClusterStats {
    /// Recompute sizes, mean centroids and SS from the current assignments.
    pub fn compute(data: &Dataset, part: &Partition) -> ClusterStats {
        let d = data.dim();
        let mut sizes = vec![0usize; part.k];
        let mut centroids = vec![vec![0.0; d]; part.k];
        for (i, &c) in part.assignments.iter().enumerate() {
            sizes[c] += 1;
            for (acc, v) in centroids[c].iter_mut().zip(data.point(i)) {
                *acc += v;
            }
        }
        for (c, size) in centroids.iter_mut().zip(&sizes) {
            if *size > 0 {
                for v in c.iter_mut() {
                    *v /= *size as f64;
                }
            }
        }
        let mut ss = vec![0.0; part.k];
        for (i, &c) in part.assignments.iter().enumerate() {
            ss[c] += squared_distance(data.point(i), &centroids[c]);
        }
        ClusterStats {
            sizes,
            centroids,
            ss,
        }
    }
}

fn score_from(a: f64, b: f64) -> f64 {
    let denom = a.max(b);
    if denom > 0.0 {
        (b - a) / denom
    } else {
        0.0
    }
}

fn check_indices(part: &Partition, indices: &[usize]) -> Result<()> {
    if part.k < 2 {
        return Err(Error::SingleCluster);
    }
    if indices.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    Ok(())
}

/// Exact silhouette of the given points against the full partition.
///
/// `a(x)` is the mean distance to the other members of its cluster, `b(x)`
/// the minimum over other clusters of the mean distance to that cluster's
/// members. Points alone in their cluster score 0.
pub fn exact_silhouette(
    data: &Dataset,
    part: &Partition,
    indices: &[usize],
) -> Result<SilhouetteReport> {
    check_indices(part, indices)?;
    let members = part.members_by_cluster();
    let sizes: Vec<usize> = members.iter().map(Vec::len).collect();
    let per_point: Vec<f64> = indices
        .par_iter()
        .map(|&i| {
            let own = part.assignments[i];
            if sizes[own] <= 1 {
                return 0.0;
            }
            let x = data.point(i);
            let mut a = 0.0;
            let mut b = f64::INFINITY;
            for (h, cluster) in members.iter().enumerate() {
                let sum: f64 = cluster.iter().map(|&p| euclidean(x, data.point(p))).sum();
                if h == own {
                    a = sum / (sizes[h] - 1) as f64;
                } else {
                    b = b.min(sum / sizes[h] as f64);
                }
            }
            score_from(a, b)
        })
        .collect();
    let (micro, macro_avg, combined) = aggregate(&per_point, part, indices, 0.5)?;
    Ok(SilhouetteReport {
        per_point,
        evaluated_indices: indices.to_vec(),
        micro,
        macro_avg,
        combined,
        mode: SilhouetteMode::Exact,
    })
}

/// Refined silhouette approximation from cluster sizes, centroids and SS.
///
/// `a` approximates the mean intra-cluster distance from the point-centroid
/// distance plus the cluster spread; `b` adds the candidate cluster's mean
/// squared spread to the centroid distance. Points in singleton clusters
/// score 0.
pub fn approx_silhouette_apr(
    data: &Dataset,
    stats: &ClusterStats,
    part: &Partition,
    indices: &[usize],
) -> Result<SilhouetteReport> {
    check_indices(part, indices)?;
    let per_point: Vec<f64> = indices
        .par_iter()
        .map(|&i| {
            let own = part.assignments[i];
            let size = stats.sizes[own];
            if size <= 1 {
                return 0.0;
            }
            let x = data.point(i);
            let d2_own = squared_distance(x, &stats.centroids[own]);
            let a = ((size as f64 * d2_own + stats.ss[own]) / (size - 1) as f64).sqrt();
            let mut b = f64::INFINITY;
            for h in 0..part.k {
                if h == own || stats.sizes[h] == 0 {
                    continue;
                }
                let d2 = squared_distance(x, &stats.centroids[h]);
                b = b.min((d2 + stats.ss[h] / stats.sizes[h] as f64).sqrt());
            }
            score_from(a, b)
        })
        .collect();
    let (micro, macro_avg, combined) = aggregate(&per_point, part, indices, 0.5)?;
    Ok(SilhouetteReport {
        per_point,
        evaluated_indices: indices.to_vec(),
        micro,
        macro_avg,
        combined,
        mode: SilhouetteMode::Apr,
    })
}

/// Centroid-distance-only approximation: `a` is the distance to the own
/// centroid, `b` the distance to the nearest other centroid.
///
/// Kept as a comparison baseline; the refinement loop never uses it.
pub fn approx_silhouette_aps(
    data: &Dataset,
    part: &Partition,
    indices: &[usize],
) -> Result<SilhouetteReport> {
    check_indices(part, indices)?;
    let stats = ClusterStats::compute(data, part);
    let per_point: Vec<f64> = indices
        .par_iter()
        .map(|&i| {
            let own = part.assignments[i];
            let x = data.point(i);
            let a = euclidean(x, &stats.centroids[own]);
            let mut b = f64::INFINITY;
            for h in 0..part.k {
                if h != own && stats.sizes[h] > 0 {
                    b = b.min(euclidean(x, &stats.centroids[h]));
                }
            }
            score_from(a, b)
        })
        .collect();
    let (micro, macro_avg, combined) = aggregate(&per_point, part, indices, 0.5)?;
    Ok(SilhouetteReport {
        per_point,
        evaluated_indices: indices.to_vec(),
        micro,
        macro_avg,
        combined,
        mode: SilhouetteMode::Aps,
    })
}

/// Aggregate per-point scores into (micro, macro, combined).
///
/// Micro is the mean over evaluated points; macro the mean over clusters
/// (with at least one evaluated point) of the per-cluster means; combined
/// is `alpha * micro + (1 - alpha) * macro`.
pub fn aggregate(
    per_point: &[f64],
    part: &Partition,
    evaluated: &[usize],
    alpha: f64,
) -> Result<(f64, f64, f64)> {
    if evaluated.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    debug_assert_eq!(per_point.len(), evaluated.len());
    let micro = per_point.iter().sum::<f64>() / per_point.len() as f64;
    let mut sums = vec![0.0; part.k];
    let mut counts = vec![0usize; part.k];
    for (&i, &s) in evaluated.iter().zip(per_point) {
        let c = part.assignments[i];
        sums[c] += s;
        counts[c] += 1;
    }
    let mut cluster_means = 0.0;
    let mut populated = 0usize;
    for (sum, &count) in sums.iter().zip(&counts) {
        if count > 0 {
            cluster_means += sum / count as f64;
            populated += 1;
        }
    }
    let macro_avg = cluster_means / populated as f64;
    let combined = alpha * micro + (1.0 - alpha) * macro_avg;
    Ok((micro, macro_avg, combined))
}

/// Draw the evaluated index set for one iteration.
///
/// The micro objective samples m points uniformly without replacement; the
/// macro and combined objectives take `m / k` points per cluster (the whole
/// cluster when smaller) and hand the remainder out round-robin by cluster
/// index. Either way every cluster contributes at least one point, so for
/// the micro strategy unrepresented clusters swap one random member in for
/// a random pick from the most-sampled cluster.
pub fn sample_indices(
    part: &Partition,
    m: usize,
    objective: Objective,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<usize>> {
    let n = part.n();
    if m < part.k {
        return Err(Error::SampleTooSmall { m, k: part.k });
    }
    if m > n {
        return Err(Error::InvalidConfig(format!(
            "sample size m = {m} exceeds n = {n}"
        )));
    }
    if m == n {
        return Ok((0..n).collect());
    }
    let members = part.members_by_cluster();
    let mut picked = match objective {
        Objective::Micro => {
            let mut picked: Vec<usize> = rand::seq::index::sample(rng, n, m).into_vec();
            // Swap-in repair so every cluster is represented.
            let mut counts = vec![0usize; part.k];
            for &i in &picked {
                counts[part.assignments[i]] += 1;
            }
            for c in 0..part.k {
                if counts[c] > 0 || members[c].is_empty() {
                    continue;
                }
                let incoming = members[c][rng.random_range(0..members[c].len())];
                let donor = counts
                    .iter()
                    .enumerate()
                    .max_by(|(ia, a), (ib, b)| a.cmp(b).then(ib.cmp(ia)))
                    .map(|(j, _)| j)
                    .expect("at least one cluster sampled");
                let donor_positions: Vec<usize> = picked
                    .iter()
                    .enumerate()
                    .filter(|(_, &i)| part.assignments[i] == donor)
                    .map(|(pos, _)| pos)
                    .collect();
                let out = donor_positions[rng.random_range(0..donor_positions.len())];
                picked[out] = incoming;
                counts[donor] -= 1;
                counts[c] += 1;
            }
            picked
        }
        Objective::Macro | Objective::Combined { .. } => {
            let base = m / part.k;
            let mut quotas: Vec<usize> = members.iter().map(|c| c.len().min(base)).collect();
            let mut remainder = m - quotas.iter().sum::<usize>();
            let mut j = 0;
            while remainder > 0 {
                if quotas[j] < members[j].len() {
                    quotas[j] += 1;
                    remainder -= 1;
                }
                j = (j + 1) % part.k;
            }
            let mut picked = Vec::with_capacity(m);
            for (cluster, &quota) in members.iter().zip(&quotas) {
                if quota == cluster.len() {
                    picked.extend_from_slice(cluster);
                } else {
                    for pos in rand::seq::index::sample(rng, cluster.len(), quota) {
                        picked.push(cluster[pos]);
                    }
                }
            }
            picked
        }
    };
    picked.sort_unstable();
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::validate_dataset;
    use rand::SeedableRng;

    fn points_1d(xs: &[f64]) -> Dataset {
        validate_dataset(xs.iter().map(|&x| vec![x]).collect(), None, "t").unwrap()
    }

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn exact_two_blob_hand_value() {
        let data = points_1d(&[0.0, 1.0, 10.0, 11.0]);
        let part = Partition::new(vec![0, 0, 1, 1], vec![vec![0.5], vec![10.5]]);
        let rep = exact_silhouette(&data, &part, &all(4)).unwrap();
        // a(0) = 1, b(0) = (10 + 11) / 2 = 10.5
        assert!((rep.per_point[0] - 9.5 / 10.5).abs() < 1e-12);
    }

    #[test]
    fn exact_singleton_scores_zero() {
        let data = points_1d(&[0.0, 10.0, 11.0]);
        let part = Partition::new(vec![0, 1, 1], vec![vec![0.0], vec![10.5]]);
        let rep = exact_silhouette(&data, &part, &all(3)).unwrap();
        assert_eq!(rep.per_point[0], 0.0);
    }

    #[test]
    fn exact_equal_a_b_scores_zero() {
        // Point 1 sits exactly between its own cluster mate and the other
        // cluster's single member: a = b = 1.
        let data = points_1d(&[0.0, 1.0, 2.0, 2.5]);
        let part = Partition::new(vec![0, 0, 1, 1], vec![vec![0.5], vec![2.25]]);
        let rep = exact_silhouette(&data, &part, &[1]).unwrap();
        let a = 1.0;
        let b = (1.0 + 1.5) / 2.0;
        assert!((rep.per_point[0] - (b - a) / b).abs() < 1e-12);
        let data2 = points_1d(&[0.0, 1.0, 2.0]);
        let part2 = Partition::new(vec![0, 0, 1], vec![vec![0.5], vec![2.0]]);
        let rep2 = exact_silhouette(&data2, &part2, &[1]).unwrap();
        assert_eq!(rep2.per_point[0], 0.0);
    }

    #[test]
    fn exact_rejects_single_cluster() {
        let data = points_1d(&[0.0, 1.0]);
        let part = Partition::new(vec![0, 0], vec![vec![0.5]]);
        assert!(matches!(
            exact_silhouette(&data, &part, &all(2)),
            Err(Error::SingleCluster)
        ));
    }

    #[test]
    fn apr_hand_value_and_two_point_identity() {
        let data = points_1d(&[0.0, 2.0, 10.0, 12.0]);
        let part = Partition::new(vec![0, 0, 1, 1], vec![vec![1.0], vec![11.0]]);
        let stats = ClusterStats::compute(&data, &part);
        assert_eq!(stats.sizes, vec![2, 2]);
        assert!((stats.ss[0] - 2.0).abs() < 1e-12);
        let rep = approx_silhouette_apr(&data, &stats, &part, &all(4)).unwrap();
        let a = 2.0; // sqrt((2 * 1 + 2) / 1), equal to the exact a
        let b = (121.0_f64 + 1.0).sqrt();
        assert!((rep.per_point[0] - (b - a) / b).abs() < 1e-12);
        // Two-point clusters: the approximate a equals the exact a.
        let exact = exact_silhouette(&data, &part, &all(4)).unwrap();
        let exact_a0 = 2.0;
        assert_eq!(exact.per_point[0], (11.0 - exact_a0) / 11.0);
    }

    #[test]
    fn aps_hand_values() {
        // Point at its own centroid, other centroid 5 away.
        let data = points_1d(&[0.0, 0.0, 5.0]);
        let part = Partition::new(vec![0, 0, 1], vec![vec![0.0], vec![5.0]]);
        let rep = approx_silhouette_aps(&data, &part, &[0]).unwrap();
        assert_eq!(rep.per_point[0], 1.0);
        // Inflation against exact on the two-blob instance.
        let data = points_1d(&[0.0, 2.0, 10.0, 12.0]);
        let part = Partition::new(vec![0, 0, 1, 1], vec![vec![1.0], vec![11.0]]);
        let rep = approx_silhouette_aps(&data, &part, &all(4)).unwrap();
        assert!((rep.per_point[0] - 10.0 / 11.0).abs() < 1e-12);
        let exact = exact_silhouette(&data, &part, &all(4)).unwrap();
        assert!(rep.per_point[0] > exact.per_point[0]);
    }

    #[test]
    fn aps_equidistant_scores_zero() {
        let data = points_1d(&[1.0, 0.0, 2.0]);
        let part = Partition::new(vec![0, 0, 1], vec![vec![0.5], vec![2.0]]);
        // Recomputed means: cluster 0 at 0.5, cluster 1 at 2.0; point at 1.25
        // would be equidistant from 0.5 and 2.0.
        let data2 = points_1d(&[1.25, -0.25, 2.0]);
        let part2 = Partition::new(vec![0, 0, 1], vec![vec![0.5], vec![2.0]]);
        let rep = approx_silhouette_aps(&data2, &part2, &[0]).unwrap();
        assert!(rep.per_point[0].abs() < 1e-12);
        drop((data, part));
    }

    #[test]
    fn aggregate_micro_macro_split() {
        // Cluster A scores {0.9, 0.9, 0.9}, cluster B {0.1}.
        let part = Partition::new(vec![0, 0, 0, 1], vec![vec![0.0], vec![1.0]]);
        let (micro, macro_avg, combined) =
            aggregate(&[0.9, 0.9, 0.9, 0.1], &part, &[0, 1, 2, 3], 0.5).unwrap();
        assert!((micro - 0.7).abs() < 1e-12);
        assert!((macro_avg - 0.5).abs() < 1e-12);
        assert!((combined - 0.6).abs() < 1e-12);
    }

    #[test]
    fn aggregate_constant_scores() {
        let part = Partition::new(vec![0, 1, 1], vec![vec![0.0], vec![1.0]]);
        let (micro, macro_avg, combined) =
            aggregate(&[0.5, 0.5, 0.5], &part, &[0, 1, 2], 0.25).unwrap();
        assert_eq!(micro, 0.5);
        assert_eq!(macro_avg, 0.5);
        assert!((combined - 0.5).abs() < 1e-12);
    }

    #[test]
    fn aggregate_equal_clusters_micro_equals_macro() {
        let part = Partition::new(vec![0, 0, 1, 1], vec![vec![0.0], vec![1.0]]);
        let scores = [0.2, 0.4, 0.6, 0.8];
        let (micro, macro_avg, _) = aggregate(&scores, &part, &[0, 1, 2, 3], 0.5).unwrap();
        assert!((micro - macro_avg).abs() < 1e-12);
    }

    #[test]
    fn sample_full_returns_everything() {
        let part = Partition::new(vec![0, 1, 0, 1], vec![vec![0.0], vec![1.0]]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sample_indices(&part, 4, Objective::Micro, &mut rng).unwrap();
        assert_eq!(s, vec![0, 1, 2, 3]);
        let s = sample_indices(&part, 4, Objective::Macro, &mut rng).unwrap();
        assert_eq!(s, vec![0, 1, 2, 3]);
    }

    #[test]
    fn sample_macro_exhausted_cluster_round_robin() {
        // Clusters of size 100 and 4, m = 10: 5 + 4 with the leftover going
        // back to cluster 0, so 6 from the first cluster.
        let mut assignments = vec![0usize; 100];
        assignments.extend([1, 1, 1, 1]);
        let part = Partition::new(assignments, vec![vec![0.0], vec![1.0]]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = sample_indices(&part, 10, Objective::Macro, &mut rng).unwrap();
        assert_eq!(s.len(), 10);
        let from_first = s.iter().filter(|&&i| i < 100).count();
        assert_eq!(from_first, 6);
        assert_eq!(s.iter().filter(|&&i| i >= 100).count(), 4);
    }

    #[test]
    fn sample_micro_distinct_and_covering() {
        let mut assignments = vec![0usize; 60];
        assignments.extend(vec![1usize; 39]);
        assignments.push(2);
        let part = Partition::new(assignments, vec![vec![0.0], vec![1.0], vec![2.0]]);
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = sample_indices(&part, 10, Objective::Micro, &mut rng).unwrap();
            assert_eq!(s.len(), 10);
            let mut dedup = s.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), 10, "indices must be distinct");
            let mut counts = [0usize; 3];
            for &i in &s {
                counts[part.assignments[i]] += 1;
            }
            assert!(counts.iter().all(|&c| c > 0), "cluster missed: {counts:?}");
        }
    }

    #[test]
    fn sample_micro_proportionality() {
        // Two clusters 60/40; over many seeds the mean share from the first
        // cluster should be close to 0.6.
        let mut assignments = vec![0usize; 60];
        assignments.extend(vec![1usize; 40]);
        let part = Partition::new(assignments, vec![vec![0.0], vec![1.0]]);
        let mut total_first = 0usize;
        let trials = 1000;
        for seed in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = sample_indices(&part, 10, Objective::Micro, &mut rng).unwrap();
            total_first += s.iter().filter(|&&i| i < 60).count();
        }
        let share = total_first as f64 / (10 * trials) as f64;
        assert!((share - 0.6).abs() < 0.03, "share = {share}");
    }

    #[test]
    fn sample_too_small_rejected() {
        let part = Partition::new(vec![0, 1, 2], vec![vec![0.0], vec![1.0], vec![2.0]]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            sample_indices(&part, 2, Objective::Micro, &mut rng),
            Err(Error::SampleTooSmall { m: 2, k: 3 })
        ));
    }

    #[test]
    fn cluster_stats_ss_matches_recomputation() {
        let data = points_1d(&[0.0, 1.0, 2.0, 9.0, 11.0]);
        let part = Partition::new(vec![0, 0, 0, 1, 1], vec![vec![1.0], vec![10.0]]);
        let stats = ClusterStats::compute(&data, &part);
        let mut ss = vec![0.0; 2];
        for (i, &c) in part.assignments.iter().enumerate() {
            ss[c] += squared_distance(data.point(i), &stats.centroids[c]);
        }
        for (got, want) in stats.ss.iter().zip(&ss) {
            assert!((got - want).abs() <= 1e-9 * want.max(1.0));
        }
    }
}
