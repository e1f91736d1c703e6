use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },

    #[error("no data rows in {path}")]
    NoRows { path: String },

    #[error("ragged row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-numeric feature cell {value:?} at row {row}, column {column}")]
    NonNumericCell {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("non-finite feature value at row {row}, column {column}")]
    NonFiniteCell { row: usize, column: usize },

    #[error("label cell {value:?} at row {row}, column {column} is not 0 or 1")]
    NonBinaryLabel {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("column {name:?} not found in header")]
    MissingColumn { name: String },

    #[error("column index {index} out of range for {width} columns")]
    ColumnOutOfRange { index: usize, width: usize },

    #[error("dataset needs at least {needed} rows, found {found}")]
    TooFewRows { needed: usize, found: usize },

    #[error("dataset has no feature columns")]
    NoFeatures,

    #[error("unknown metric {0:?}")]
    UnknownMetric(String),

    #[error("unknown lambda mode {0:?}")]
    UnknownLambdaMode(String),

    #[error("min_pts {min_pts} out of range [2, {m_max}]")]
    MinPtsOutOfRange { min_pts: usize, m_max: usize },

    #[error("m_max {m_max} out of range [2, {n}]")]
    MmaxOutOfRange { m_max: usize, n: usize },

    #[error("m_max {m_max} too small: need at least 4 for a dissimilarity elbow")]
    MmaxTooSmall { m_max: usize },

    #[error("mst was built at min_pts {mst_min_pts} but scores requested at {requested}")]
    MstMinPtsMismatch {
        mst_min_pts: usize,
        requested: usize,
    },

    #[error("sequence length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("sequence too short: need at least {needed} values, found {found}")]
    SequenceTooShort { needed: usize, found: usize },

    #[error("knee index {knee_index} leaves fewer than two points to fit")]
    TrendUnfittable { knee_index: usize },

    #[error("ground truth required for this metric")]
    MissingGroundTruth,

    #[error("n={n} out of range [1, {len}] for precision@n")]
    PrecisionNOutOfRange { n: usize, len: usize },

    #[error("gmm needs at least d+2={needed} points, found {found}")]
    GmmTooFewPoints { needed: usize, found: usize },

    #[error("gmm fit failed for every component count after {attempts} attempts per k")]
    GmmFitFailed { attempts: usize },

    #[error("mixed generation needs count >= 3, found {count}")]
    MixedCountTooSmall { count: usize },

    #[error("alpha must be positive, found {alpha}")]
    NonPositiveAlpha { alpha: f64 },

    #[error("count must be at least 1")]
    ZeroCount,
}

pub type Result<T> = std::result::Result<T, Error>;
