//! Self-organizing map whose nodes match and grow to input patterns of
//! varying length, with the data loaders and evaluation harness used for
//! motif discovery and word recognition experiments.

// `!(x >= lo)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cluster;
pub mod data;
pub mod error;
pub mod eval;
pub mod model;
pub mod organize;
pub mod persist;

pub use cluster::{assign, cluster_batch, extract_motifs, ClusterAssignment, Motif};
pub use error::{Error, Result};
pub use model::{
    activation, best_alignment, weighted_distance, winner, Comparison, MatchResult, Node, NodeId, Params, Pattern,
};
pub use organize::{init_map, MapState, StepOutcome, TrainOptions, TrainSummary};
