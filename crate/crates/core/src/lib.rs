//! Parameter-free unsupervised outlier detection built on HDBSCAN* density
//! hierarchies.
//!
//! The toolkit computes GLOSH outlier scores across a whole range of `min_pts`
//! values, selects the best value at the elbow of the rank-dissimilarity
//! profile, and thresholds the resulting scores into inlier/potential-outlier
//! labels without any user-supplied parameter. A synthetic outlier generator
//! and an evaluation harness round out the end-to-end loop.
//!
//! Modules follow the pipeline order:
//!
//! * [`dataset`] - CSV ingestion, validation, optional min-max scaling
//! * [`neighbors`] - pairwise distances and the core-distance table
//! * [`mstgraph`] - mutual-reachability MSTs and the CORE-SG fast path
//! * [`glosh`] - GLOSH scores and score profiles over `min_pts`
//! * [`autoglosh`] - rank-dissimilarity profile and elbow selection of `m*`
//! * [`polar`] - knee and regression-adjusted thresholds, labeling
//! * [`synthgen`] - GMM-based synthetic outlier generation
//! * [`eval`] - Precision@n and threshold metrics
//! * [`pipeline`] - the composed end-to-end run

pub mod autoglosh;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod glosh;
pub mod mstgraph;
pub mod neighbors;
pub mod pipeline;
pub mod polar;
pub mod synthgen;

pub use autoglosh::{MinPtsSelection, OrdProfile, SortedScoreSequence};
pub use dataset::{ColumnSelector, Dataset, GroundTruth, LoadOptions};
pub use error::{Error, Result};
pub use eval::{Confusion, MetricsReport};
pub use glosh::{GloshProfileMatrix, GloshScores, LambdaMode};
pub use mstgraph::{CoreSg, MstEdge, MstEdges};
pub use neighbors::{CoreDistanceTable, DistanceMatrix, Metric};
pub use pipeline::{PipelineConfig, PipelineOutcome};
pub use polar::{PolarResult, TrendLine};
pub use synthgen::{GmmModel, OutlierKind, SyntheticOutlierSpec, SyntheticOutliers};
