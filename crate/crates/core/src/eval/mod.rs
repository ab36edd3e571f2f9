//! Recognition metrics, experiment protocols and parameter search.

pub mod forgetting;
pub mod lhs;
pub mod metrics;
pub mod motif;
pub mod report;
pub mod search;
pub mod segmentation;

pub use forgetting::{
    build_size_sets, forgetting_sweep, procedure_a, procedure_b, ForgettingSweep, Procedure, SizeSet, DEFAULT_SIZES,
};
pub use lhs::{lhs_sample, LhsSpec};
pub use metrics::{f_measure, recognition_eval, EvalReport, SEGMENTATION_BASELINES, SEGMENTATION_REFERENCE};
pub use motif::{motif_discovery, MotifRun};
pub use search::{search_best, SearchResult};
pub use segmentation::{segmentation_eval, SegmentationConfig};
