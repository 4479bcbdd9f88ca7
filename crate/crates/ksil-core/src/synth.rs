//! Seeded synthetic datasets: Gaussian blob families with varying per-cluster
//! spreads, a high-dimensional pair of easy/hard blob sets, and a noisy
//! non-convex mix of a circle, a line segment, and uniform background noise.
//! All geometry constants are fixed so results are reproducible.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// 500 points, 5 planar Gaussian clusters with spreads 0.4 to 2.0.
    S1,
    /// 500 points, 5 Gaussian clusters with sigma 1 in 12 dimensions.
    S2,
    /// As S2 with sigma 2.5.
    S3,
    /// 1500 points: noisy circle, noisy line, 50% uniform background noise.
    S4,
    /// Configurable isotropic Gaussian blobs.
    Blobs,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "s1" => Some(Family::S1),
            "s2" => Some(Family::S2),
            "s3" => Some(Family::S3),
            "s4" => Some(Family::S4),
            "blobs" => Some(Family::Blobs),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Family::S1 => "s1",
            Family::S2 => "s2",
            Family::S3 => "s3",
            Family::S4 => "s4",
            Family::Blobs => "blobs",
        }
    }
}

/// Spread ladder of the varying-density family.
const S1_SIGMAS: [f64; 5] = [0.4, 0.8, 1.2, 1.6, 2.0];
/// Planar cluster centers sit on a circle of this radius.
const CIRCLE_LAYOUT_RADIUS: f64 = 10.0;
/// Axis-aligned centers of the high-dimensional families sit at this
/// coordinate on their own axis.
const S2_AXIS_OFFSET: f64 = 8.0;
const BLOBS_AXIS_OFFSET: f64 = 10.0;
/// Noisy-shapes geometry: circle center/radius, line endpoints, jitter.
const S4_CIRCLE_CENTER: [f64; 2] = [-8.0, 0.0];
const S4_CIRCLE_RADIUS: f64 = 4.0;
const S4_CIRCLE_JITTER: f64 = 0.3;
const S4_LINE_FROM: [f64; 2] = [6.0, -8.0];
const S4_LINE_TO: [f64; 2] = [14.0, 8.0];
const S4_LINE_JITTER: f64 = 0.3;
const S4_NOISE_BOX: ([f64; 2], [f64; 2]) = ([-16.0, -12.0], [20.0, 12.0]);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub family: Family,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    /// Per-cluster standard deviations, recycled when shorter than k.
    pub sigmas: Vec<f64>,
    pub noise_fraction: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn s1(seed: u64) -> Self {
        SyntheticSpec {
            family: Family::S1,
            n: 500,
            d: 2,
            k: 5,
            sigmas: S1_SIGMAS.to_vec(),
            noise_fraction: 0.0,
            seed,
        }
    }

    pub fn s2(seed: u64) -> Self {
        SyntheticSpec {
            family: Family::S2,
            n: 500,
            d: 12,
            k: 5,
            sigmas: vec![1.0],
            noise_fraction: 0.0,
            seed,
        }
    }

    pub fn s3(seed: u64) -> Self {
        SyntheticSpec {
            sigmas: vec![2.5],
            family: Family::S3,
            ..SyntheticSpec::s2(seed)
        }
    }

    pub fn s4(seed: u64) -> Self {
        SyntheticSpec {
            family: Family::S4,
            n: 1500,
            d: 2,
            k: 3,
            sigmas: vec![S4_CIRCLE_JITTER],
            noise_fraction: 0.5,
            seed,
        }
    }

    pub fn blobs(n: usize, d: usize, k: usize, sigma: f64, noise_fraction: f64, seed: u64) -> Self {
        SyntheticSpec {
            family: Family::Blobs,
            n,
            d,
            k,
            sigmas: vec![sigma],
            noise_fraction,
            seed,
        }
    }

    pub fn for_family(family: Family, seed: u64) -> Self {
        match family {
            Family::S1 => SyntheticSpec::s1(seed),
            Family::S2 => SyntheticSpec::s2(seed),
            Family::S3 => SyntheticSpec::s3(seed),
            Family::S4 => SyntheticSpec::s4(seed),
            Family::Blobs => SyntheticSpec::blobs(500, 2, 5, 1.0, 0.0, seed),
        }
    }

    /// Number of distinct ground-truth classes, counting the noise label.
    pub fn ground_truth_classes(&self) -> usize {
        match self.family {
            Family::S4 => 3,
            _ => {
                if self.noise_fraction > 0.0 {
                    self.k + 1
                } else {
                    self.k
                }
            }
        }
    }

    /// The natural cluster count to hand a clustering algorithm.
    pub fn ground_truth_k(&self) -> usize {
        match self.family {
            Family::S4 => 3,
            _ => self.k,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.n < self.k {
            return Err(Error::InvalidSpec(format!(
                "need n >= k >= 1, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        if self.d == 0 {
            return Err(Error::InvalidSpec("dimension must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.noise_fraction) {
            return Err(Error::InvalidSpec(format!(
                "noise fraction {} must lie in [0, 1)",
                self.noise_fraction
            )));
        }
        if self.sigmas.is_empty() || self.sigmas.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidSpec("sigmas must be positive".into()));
        }
        Ok(())
    }
}

/// Generate a labeled synthetic dataset from a spec. The same spec always
/// yields the same bytes.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::S4 => generate_shapes(spec, &mut rng),
        Family::S1 | Family::S2 | Family::S3 | Family::Blobs => generate_blobs(spec, &mut rng),
    }
}

/// Cluster centers: on a circle for d = 2 (or whenever k exceeds d), on
/// scaled one-hot axes otherwise.
fn centers(spec: &SyntheticSpec) -> Vec<Vec<f64>> {
    let offset = match spec.family {
        Family::S2 | Family::S3 => S2_AXIS_OFFSET,
        _ => BLOBS_AXIS_OFFSET,
    };
    if spec.d == 1 {
        return (0..spec.k).map(|j| vec![offset * 1.2 * j as f64]).collect();
    }
    if spec.d >= spec.k && spec.d > 2 {
        (0..spec.k)
            .map(|j| {
                let mut c = vec![0.0; spec.d];
                c[j] = offset;
                c
            })
            .collect()
    } else {
        (0..spec.k)
            .map(|j| {
                let angle = TAU * j as f64 / spec.k as f64;
                let mut c = vec![0.0; spec.d];
                c[0] = CIRCLE_LAYOUT_RADIUS * angle.cos();
                c[1] = CIRCLE_LAYOUT_RADIUS * angle.sin();
                c
            })
            .collect()
    }
}

fn dataset_name(spec: &SyntheticSpec) -> String {
    match spec.family {
        Family::Blobs => format!("blobs-n{}-d{}-k{}", spec.n, spec.d, spec.k),
        _ => spec.family.label().to_string(),
    }
}

fn generate_blobs(spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let centers = centers(spec);
    let n_noise = (spec.noise_fraction * spec.n as f64).round() as usize;
    let n_signal = spec.n - n_noise;
    let base = n_signal / spec.k;
    let extra = n_signal % spec.k;
    let mut points = Vec::with_capacity(spec.n);
    let mut labels = Vec::with_capacity(spec.n);
    let mut sigma_max: f64 = 0.0;
    for (j, center) in centers.iter().enumerate() {
        let count = base + usize::from(j < extra);
        let sigma = spec.sigmas[j % spec.sigmas.len()];
        sigma_max = sigma_max.max(sigma);
        for _ in 0..count {
            let p: Vec<f64> = center
                .iter()
                .map(|&c| c + sigma * rng.sample::<f64, _>(StandardNormal))
                .collect();
            points.push(p);
            labels.push(j.to_string());
        }
    }
    if n_noise > 0 {
        // Uniform noise over the center bounding box padded by 3 sigma.
        let pad = 3.0 * sigma_max;
        let mut lo = vec![f64::INFINITY; spec.d];
        let mut hi = vec![f64::NEG_INFINITY; spec.d];
        for c in &centers {
            for j in 0..spec.d {
                lo[j] = lo[j].min(c[j] - pad);
                hi[j] = hi[j].max(c[j] + pad);
            }
        }
        for _ in 0..n_noise {
            let p: Vec<f64> = (0..spec.d)
                .map(|j| rng.random_range(lo[j]..hi[j]))
                .collect();
            points.push(p);
            labels.push(spec.k.to_string());
        }
    }
    Dataset::new(points, Some(labels), dataset_name(spec))
}

fn generate_shapes(spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    if spec.d != 2 {
        return Err(Error::InvalidSpec("the shapes family is planar".into()));
    }
    let n_shape = (spec.n as f64 * (1.0 - spec.noise_fraction) / 2.0).round() as usize;
    let n_noise = spec.n - 2 * n_shape;
    let mut points = Vec::with_capacity(spec.n);
    let mut labels = Vec::with_capacity(spec.n);
    for _ in 0..n_shape {
        let angle = rng.random_range(0.0..TAU);
        let radius = S4_CIRCLE_RADIUS + S4_CIRCLE_JITTER * rng.sample::<f64, _>(StandardNormal);
        points.push(vec![
            S4_CIRCLE_CENTER[0] + radius * angle.cos(),
            S4_CIRCLE_CENTER[1] + radius * angle.sin(),
        ]);
        labels.push("0".to_string());
    }
    let dx = S4_LINE_TO[0] - S4_LINE_FROM[0];
    let dy = S4_LINE_TO[1] - S4_LINE_FROM[1];
    let len = (dx * dx + dy * dy).sqrt();
    let normal = [-dy / len, dx / len];
    for _ in 0..n_shape {
        let t = rng.random_range(0.0..1.0);
        let off = S4_LINE_JITTER * rng.sample::<f64, _>(StandardNormal);
        points.push(vec![
            S4_LINE_FROM[0] + t * dx + off * normal[0],
            S4_LINE_FROM[1] + t * dy + off * normal[1],
        ]);
        labels.push("1".to_string());
    }
    let (lo, hi) = S4_NOISE_BOX;
    for _ in 0..n_noise {
        points.push(vec![
            rng.random_range(lo[0]..hi[0]),
            rng.random_range(lo[1]..hi[1]),
        ]);
        labels.push("2".to_string());
    }
    Dataset::new(points, Some(labels), dataset_name(spec))
}

/// The ten-dataset battery used to compare the silhouette approximations:
/// the four named generators plus six blob variants, each with its natural
/// cluster count.
pub fn approximation_battery(seed: u64) -> Vec<(SyntheticSpec, usize)> {
    let named = vec![
        SyntheticSpec::s1(seed),
        SyntheticSpec::s2(seed.wrapping_add(1)),
        SyntheticSpec::s3(seed.wrapping_add(2)),
        SyntheticSpec::s4(seed.wrapping_add(3)),
        SyntheticSpec::blobs(400, 2, 3, 0.8, 0.0, seed.wrapping_add(4)),
        SyntheticSpec::blobs(500, 2, 5, 1.5, 0.0, seed.wrapping_add(5)),
        SyntheticSpec::blobs(600, 4, 4, 1.0, 0.0, seed.wrapping_add(6)),
        SyntheticSpec::blobs(500, 8, 5, 1.2, 0.0, seed.wrapping_add(7)),
        SyntheticSpec::blobs(300, 2, 2, 2.5, 0.0, seed.wrapping_add(8)),
        SyntheticSpec::blobs(750, 10, 6, 2.0, 0.0, seed.wrapping_add(9)),
    ];
    named
        .into_iter()
        .map(|spec| {
            let k = spec.ground_truth_k();
            (spec, k)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s2_shape() {
        let data = generate_synthetic(&SyntheticSpec::s2(7)).unwrap();
        assert_eq!(data.n(), 500);
        assert_eq!(data.dim(), 12);
        assert_eq!(data.label_count(), Some(5));
        let labels = data.labels().unwrap();
        for j in 0..5 {
            let count = labels.iter().filter(|l| **l == j.to_string()).count();
            assert_eq!(count, 100);
        }
    }

    #[test]
    fn s4_noise_share() {
        let data = generate_synthetic(&SyntheticSpec::s4(3)).unwrap();
        assert_eq!(data.n(), 1500);
        let noise = data
            .labels()
            .unwrap()
            .iter()
            .filter(|l| l.as_str() == "2")
            .count();
        assert_eq!(noise, 750);
    }

    #[test]
    fn same_seed_same_bytes() {
        for family in [Family::S1, Family::S2, Family::S4, Family::Blobs] {
            let a = generate_synthetic(&SyntheticSpec::for_family(family, 99)).unwrap();
            let b = generate_synthetic(&SyntheticSpec::for_family(family, 99)).unwrap();
            assert_eq!(a, b);
            let c = generate_synthetic(&SyntheticSpec::for_family(family, 100)).unwrap();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn s1_spreads_vary() {
        let spec = SyntheticSpec::s1(11);
        let data = generate_synthetic(&spec).unwrap();
        assert_eq!(data.n(), 500);
        assert_eq!(data.dim(), 2);
        // Per-cluster empirical spread should roughly follow the ladder.
        let labels = data.labels().unwrap();
        let mut spread = Vec::new();
        for j in 0..5 {
            let pts: Vec<&Vec<f64>> = data
                .points()
                .iter()
                .zip(labels)
                .filter(|(_, l)| **l == j.to_string())
                .map(|(p, _)| p)
                .collect();
            let mean: Vec<f64> = (0..2)
                .map(|c| pts.iter().map(|p| p[c]).sum::<f64>() / pts.len() as f64)
                .collect();
            let var = pts
                .iter()
                .map(|p| (p[0] - mean[0]).powi(2) + (p[1] - mean[1]).powi(2))
                .sum::<f64>()
                / pts.len() as f64;
            spread.push((var / 2.0).sqrt());
        }
        assert!(spread[0] < spread[4]);
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = SyntheticSpec::blobs(10, 2, 20, 1.0, 0.0, 0);
        assert!(generate_synthetic(&spec).is_err());
        spec = SyntheticSpec::blobs(100, 2, 3, 1.0, 1.0, 0);
        assert!(generate_synthetic(&spec).is_err());
        spec = SyntheticSpec::blobs(100, 2, 3, -1.0, 0.0, 0);
        assert!(generate_synthetic(&spec).is_err());
    }

    #[test]
    fn battery_has_ten_entries() {
        let battery = approximation_battery(1);
        assert_eq!(battery.len(), 10);
        for (spec, k) in &battery {
            let data = generate_synthetic(spec).unwrap();
            assert!(*k >= 2 && *k < data.n());
        }
    }
}
