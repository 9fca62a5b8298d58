//! Low-diameter clustering, probabilistic spanners and spanner-based leverage
//! upper bounds.

mod cluster;
mod estimate;
mod prob_spanner;

pub use cluster::{diameter_bound, est_cluster, shift_cap, ClusterPartition};
pub use estimate::{spanner_estimate, EstimateConfig, SpannerEstimate};
pub use prob_spanner::{
    check_forests, prob_spanner, scale_of, stretches, subgraph_distance, Forest, SpannerConfig, SpannerForest, CLUSTER_BETA,
    C_STR,
};
