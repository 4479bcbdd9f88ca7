#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

//! Independent oracles shared by the integration suites. These re-derive
//! the quantities under test directly from their definitions, without going
//! through the library's computation paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ksil_core::{Dataset, Partition};

/// Naive per-point silhouette: double loop over the raw definition. Mean
/// distance to the other members of the own cluster versus the minimum
/// mean distance to another cluster; singletons score 0.
pub fn naive_silhouette(data: &Dataset, part: &Partition) -> Vec<f64> {
    let n = data.n();
    let mut scores = vec![0.0; n];
    for i in 0..n {
        let own = part.assignments[i];
        let own_size = part.assignments.iter().filter(|&&c| c == own).count();
        if own_size <= 1 {
            continue;
        }
        let mut a = 0.0;
        for j in 0..n {
            if j != i && part.assignments[j] == own {
                a += dist(data.point(i), data.point(j));
            }
        }
        a /= (own_size - 1) as f64;
        let mut b = f64::INFINITY;
        for other in 0..part.k {
            if other == own {
                continue;
            }
            let mut sum = 0.0;
            let mut count = 0usize;
            for j in 0..n {
                if part.assignments[j] == other {
                    sum += dist(data.point(i), data.point(j));
                    count += 1;
                }
            }
            if count > 0 {
                b = b.min(sum / count as f64);
            }
        }
        let denom = a.max(b);
        scores[i] = if denom > 0.0 { (b - a) / denom } else { 0.0 };
    }
    scores
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Exact one-sided (greater) Wilcoxon signed-rank p-value by enumerating
/// all 2^n sign assignments. Requires distinct absolute differences.
pub fn wilcoxon_enumeration_p_greater(diffs: &[f64]) -> f64 {
    let non_zero: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    let n = non_zero.len();
    assert!(n <= 20, "enumeration oracle limited to small n");
    // Ranks of |d| (1-based); the oracle assumes no ties.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| non_zero[a].abs().partial_cmp(&non_zero[b].abs()).unwrap());
    let mut ranks = vec![0usize; n];
    for (r, &idx) in order.iter().enumerate() {
        ranks[idx] = r + 1;
    }
    let observed: usize = non_zero
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let mut at_least = 0u64;
    for mask in 0u64..(1u64 << n) {
        let w: usize = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| ranks[i])
            .sum();
        if w >= observed {
            at_least += 1;
        }
    }
    at_least as f64 / (1u64 << n) as f64
}

/// A random small clustering instance: points, a partition with every
/// cluster non-empty, and nearest-centroid-free random assignments.
pub fn random_instance(
    seed: u64,
    max_n: usize,
    max_d: usize,
    ks: &[usize],
) -> (Dataset, Partition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = ks[rng.random_range(0..ks.len())];
    let n = rng.random_range(k.max(4)..=max_n);
    let d = rng.random_range(1..=max_d);
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-5.0..5.0)).collect())
        .collect();
    let data = Dataset::new(points, None, format!("rand-{seed}")).unwrap();
    // Random assignments with every cluster populated.
    let mut assignments: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    for c in 0..k {
        assignments[c] = c;
    }
    let mut centroids = vec![vec![0.0; d]; k];
    let mut sizes = vec![0usize; k];
    for (i, &c) in assignments.iter().enumerate() {
        sizes[c] += 1;
        for (acc, v) in centroids[c].iter_mut().zip(data.point(i)) {
            *acc += v;
        }
    }
    for (c, s) in centroids.iter_mut().zip(&sizes) {
        for v in c.iter_mut() {
            *v /= *s as f64;
        }
    }
    let part = Partition::new(assignments, centroids);
    (data, part)
}
