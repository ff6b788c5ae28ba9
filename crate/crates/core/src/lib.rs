//! Deterministic approximate counting of independent sets in bipartite
//! graphs whose left side has maximum degree at most 5.
//!
//! - [`graph`]: bipartite graphs and removal overlays.
//! - [`exact`]: exact big-integer counts and ratios for small instances.
//! - [`fptas`]: the depth-bounded ratio recursion and the counting loop.
//! - [`decay`]: numerical checks of the decay-rate bounds behind the error
//!   guarantee.
//! - [`format`], [`generate`], [`report`]: graph files, generators and JSON
//!   run reports.

pub mod decay;
pub mod exact;
pub mod format;
pub mod fptas;
pub mod generate;
pub mod graph;
pub mod report;

pub use exact::{exact_count, exact_count_via_ratios, exact_ratio, ExactCount, ExactError, ExactRatio};
pub use fptas::{
    count_with_depth, count_with_epsilon, depth_for_epsilon, estimate_log_count, estimate_ratio,
    CountOptions, DepthBudget, FptasError, LogCount, RatioEstimate, RecursionStats,
};
pub use graph::{BipartiteGraph, GraphError, ResidualView, Side, VertexRef};
