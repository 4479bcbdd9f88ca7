use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An n x d point matrix with optional ground-truth labels.
///
/// Construct through [`Dataset::new`] (or [`validate_dataset`]), which
/// enforces that all points share one dimension and every coordinate is
/// finite. Values are immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    points: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
    name: String,
}

impl Dataset {
    pub fn new(
        points: Vec<Vec<f64>>,
        labels: Option<Vec<String>>,
        name: impl Into<String>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::RaggedDimensions {
                row: 0,
                expected: 1,
                found: 0,
            });
        }
        for (row, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::RaggedDimensions {
                    row,
                    expected: dim,
                    found: p.len(),
                });
            }
            for (col, v) in p.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteValue { row, col });
                }
            }
        }
        if let Some(ref l) = labels {
            if l.len() != points.len() {
                return Err(Error::LabelLengthMismatch {
                    points: points.len(),
                    labels: l.len(),
                });
            }
        }
        Ok(Dataset {
            points,
            labels,
            name: name.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of distinct ground-truth labels, if labels are present.
    pub fn label_count(&self) -> Option<usize> {
        self.labels.as_ref().map(|l| {
            let mut seen: Vec<&str> = l.iter().map(String::as_str).collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        })
    }
}

/// Validate a raw point matrix (and optional labels) into a [`Dataset`].
pub fn validate_dataset(
    raw: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
    name: impl Into<String>,
) -> Result<Dataset> {
    Dataset::new(raw, labels, name)
}

/// Per-feature z-score standardization.
///
/// Subtracts the feature mean and divides by the population standard
/// deviation; constant features map to all zeros.
pub fn standardize(data: &Dataset) -> Result<Dataset> {
    let n = data.n();
    if n < 2 {
        return Err(Error::InvalidConfig(
            "standardization requires at least 2 points".into(),
        ));
    }
    let d = data.dim();
    let mut mean = vec![0.0; d];
    for p in data.points() {
        for (m, v) in mean.iter_mut().zip(p) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut var = vec![0.0; d];
    for p in data.points() {
        for j in 0..d {
            let diff = p[j] - mean[j];
            var[j] += diff * diff;
        }
    }
    let std: Vec<f64> = var.iter().map(|v| (v / n as f64).sqrt()).collect();
    let points = data
        .points()
        .iter()
        .map(|p| {
            (0..d)
                .map(|j| {
                    if std[j] > 0.0 {
                        (p[j] - mean[j]) / std[j]
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    Dataset::new(points, data.labels().map(|l| l.to_vec()), data.name())
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_dataset_passes_through() {
        let d = validate_dataset(
            vec![vec![0.0, 1.0], vec![2.0, 3.0], vec![4.0, 5.0]],
            None,
            "t",
        )
        .unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.dim(), 2);
    }

    #[test]
    fn nan_coordinate_rejected() {
        let err = validate_dataset(vec![vec![0.0], vec![f64::NAN]], None, "t").unwrap_err();
        assert!(matches!(err, Error::NonFiniteValue { row: 1, col: 0 }));
    }

    #[test]
    fn label_length_mismatch_rejected() {
        let pts = vec![vec![0.0]; 4];
        let labels = Some(vec!["a".into(), "b".into(), "c".into()]);
        let err = validate_dataset(pts, labels, "t").unwrap_err();
        assert!(matches!(
            err,
            Error::LabelLengthMismatch {
                points: 4,
                labels: 3
            }
        ));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = validate_dataset(vec![vec![0.0, 1.0], vec![2.0]], None, "t").unwrap_err();
        assert!(matches!(err, Error::RaggedDimensions { row: 1, .. }));
    }

    #[test]
    fn empty_rejected() {
        assert!(matches!(
            validate_dataset(vec![], None, "t").unwrap_err(),
            Error::EmptyDataset
        ));
    }

    #[test]
    fn standardize_two_point_feature() {
        let d = validate_dataset(vec![vec![0.0], vec![10.0]], None, "t").unwrap();
        let z = standardize(&d).unwrap();
        assert_eq!(z.point(0), &[-1.0]);
        assert_eq!(z.point(1), &[1.0]);
    }

    #[test]
    fn standardize_constant_feature_is_zero() {
        let d = validate_dataset(vec![vec![3.0, 1.0], vec![3.0, 2.0]], None, "t").unwrap();
        let z = standardize(&d).unwrap();
        assert_eq!(z.point(0)[0], 0.0);
        assert_eq!(z.point(1)[0], 0.0);
    }

    #[test]
    fn standardize_postcondition() {
        let d = validate_dataset(
            vec![
                vec![1.0, -2.0],
                vec![4.0, 0.5],
                vec![9.0, 7.25],
                vec![-3.0, 7.25],
            ],
            None,
            "t",
        )
        .unwrap();
        let z = standardize(&d).unwrap();
        for j in 0..2 {
            let mean: f64 = z.points().iter().map(|p| p[j]).sum::<f64>() / z.n() as f64;
            let var: f64 = z
                .points()
                .iter()
                .map(|p| (p[j] - mean).powi(2))
                .sum::<f64>()
                / z.n() as f64;
            assert!(mean.abs() < 1e-9);
            assert!((var.sqrt() - 1.0).abs() < 1e-9 || var.sqrt() == 0.0);
        }
    }
}
