use thiserror::Error;

/// Errors produced by dataset validation, clustering, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("point {row} has {found} coordinates, expected {expected}")]
    RaggedDimensions {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite coordinate at point {row}, dimension {col}")]
    NonFiniteValue { row: usize, col: usize },
    #[error("{labels} labels for {points} points")]
    LabelLengthMismatch { points: usize, labels: usize },

    #[error("k = {k} is too small; at least 2 clusters are required")]
    KTooSmall { k: usize },
    #[error("k = {k} exceeds the number of points n = {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("silhouette requires at least 2 clusters")]
    SingleCluster,
    #[error("no point indices to evaluate")]
    EmptyIndexSet,
    #[error("sample size m = {m} is smaller than the cluster count k = {k}")]
    SampleTooSmall { m: usize, k: usize },
    #[error("cluster {cluster} has zero total weight")]
    ZeroClusterWeight { cluster: usize },
    #[error("cannot repair empty clusters: k = {k} exceeds n = {n}")]
    IrreparablePartition { k: usize, n: usize },
    #[error("neighborhood size h = {h} must satisfy 1 <= h < n = {n}")]
    InvalidNeighborhood { h: usize, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("label sequences have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("rank correlation is undefined for a constant sequence")]
    ConstantSequence,
    #[error("too few non-zero paired differences ({n}); at least 5 are required")]
    TooFewPairs { n: usize },
    #[error("too few samples ({n}); at least 2 are required")]
    TooFewSamples { n: usize },
    #[error("baseline score at pair {index} is zero")]
    ZeroBaseline { index: usize },

    #[error("invalid synthetic dataset spec: {0}")]
    InvalidSpec(String),
    #[error("parse error at row {row}{}: {message}", column.map(|c| format!(", column {c}")).unwrap_or_default())]
    ParseError {
        row: usize,
        column: Option<usize>,
        message: String,
    },
    #[error("row {row} has {found} fields, expected {expected}")]
    MixedArity {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
