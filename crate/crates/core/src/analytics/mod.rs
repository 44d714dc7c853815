//! Trend statistics over a topic-tagged corpus: lifecycle metrics and
//! quadrants, compute normalization, benchmark share, dataset usage and
//! institution statistics.

mod compute;
mod config;
mod lifecycle;
mod tallies;

pub use compute::{a100_equiv_hours, compute_usage, parse_gpu_info, ComputeRecord, ComputeRow, ComputeSummary};
pub use config::{AnalyticsConfig, MeanYearScope, QuadrantLabels};
pub use lifecycle::{
    assign_quadrant, cagr, lifecycle_metrics, normalized_mean_year, topic_year_counts, weighted_impact,
    LifecycleMetrics, Quadrant, TopicYearSeries,
};
pub use tallies::{benchmark_share, dataset_usage, institution_stats, BenchmarkShare, DatasetUsage, InstitutionStats};
