//! Per-slice performance metrics: technical and pass-network scores, their
//! combination, role-aware percentiles, expanding means and enrichment.

pub mod config;
pub mod network;
pub mod pipeline;
pub mod series;
pub mod state;
pub mod technical;

pub use config::{
    CentralityConfig, PercentileScope, PipelineConfig, TagCodes, TeamNormalization, TechnicalWeights, TieRule,
    WeightRule,
};
pub use network::{network_score, PassGraph};
pub use pipeline::{compute_match, compute_matches, MatchStates, Warning};
pub use series::{cumulative_mean, momentum, raw_slice_score, role_percentile};
pub use state::PlayerSliceState;
pub use technical::{team_volume, technical_score};
