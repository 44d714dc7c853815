//! Plot-ready analytics tables and their CSV renderings.

use std::collections::BTreeMap;

use serde::Serialize;
use topicscope_core::analytics::{
    benchmark_share, compute_usage, dataset_usage, institution_stats, lifecycle_metrics, AnalyticsConfig,
    BenchmarkShare, ComputeSummary, DatasetUsage, InstitutionStats, LifecycleMetrics,
};
use topicscope_core::corpus::PaperRecord;

use crate::artifacts::TopicEntry;
use crate::error::Result;
use crate::fsutil::csv_bytes;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticsTables {
    pub lifecycle: Vec<LifecycleMetrics>,
    pub compute: ComputeSummary,
    pub benchmark_share: BTreeMap<i32, BenchmarkShare>,
    pub dataset_usage: DatasetUsage,
    pub institutions: InstitutionStats,
}

impl AnalyticsTables {
    pub fn compute(records: &[PaperRecord], names: &BTreeMap<i64, String>, config: &AnalyticsConfig) -> Result<Self> {
        config.validate()?;
        Ok(AnalyticsTables {
            lifecycle: lifecycle_metrics(records, names, config)?,
            compute: compute_usage(records, &config.gpu_table)?,
            benchmark_share: benchmark_share(records),
            dataset_usage: dataset_usage(records, &config.dataset_aliases),
            institutions: institution_stats(records),
        })
    }

    /// File name and CSV bytes of every table.
    pub fn csv_files(&self) -> Vec<(&'static str, Vec<u8>)> {
        vec![
            ("lifecycle.csv", lifecycle_csv(&self.lifecycle)),
            ("compute.csv", compute_csv(&self.compute)),
            ("benchmark_share.csv", benchmark_csv(&self.benchmark_share)),
            ("dataset_usage.csv", datasets_csv(&self.dataset_usage)),
            ("institutions.csv", institutions_csv(&self.institutions)),
            ("topic_institutions.csv", topic_institutions_csv(&self.institutions)),
            ("collab_pairs.csv", pairs_csv(&self.institutions)),
        ]
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn lifecycle_csv(rows: &[LifecycleMetrics]) -> Vec<u8> {
    csv_bytes(
        &[
            "topic_id",
            "name",
            "cagr",
            "mean_year",
            "mean_year_norm",
            "n_recent",
            "W",
            "quadrant",
        ],
        rows.iter().map(|m| {
            [
                m.topic_id.to_string(),
                m.name.clone(),
                opt(m.cagr),
                m.mean_year.to_string(),
                m.mean_year_norm.to_string(),
                m.n_recent.to_string(),
                opt(m.impact_norm),
                m.quadrant_label.clone(),
            ]
        }),
    )
}

pub fn compute_csv(s: &ComputeSummary) -> Vec<u8> {
    csv_bytes(
        &[
            "record_id",
            "year",
            "topic_id",
            "gpu_count",
            "gpu_model",
            "hours",
            "a100_equiv_hours",
        ],
        s.rows.iter().map(|r| {
            [
                r.record_id.clone(),
                r.year.to_string(),
                r.topic_id.to_string(),
                r.compute.gpu_count.to_string(),
                r.compute.gpu_model.clone(),
                r.compute.hours.to_string(),
                opt(r.a100_equiv_hours),
            ]
        }),
    )
}

pub fn benchmark_csv(s: &BTreeMap<i32, BenchmarkShare>) -> Vec<u8> {
    csv_bytes(
        &["year", "total", "benchmark", "share"],
        s.iter().map(|(y, b)| {
            [
                y.to_string(),
                b.total.to_string(),
                b.benchmark.to_string(),
                b.share.to_string(),
            ]
        }),
    )
}

pub fn datasets_csv(u: &DatasetUsage) -> Vec<u8> {
    csv_bytes(
        &["dataset", "year", "papers"],
        u.iter().flat_map(|(d, years)| {
            years
                .iter()
                .map(move |(y, c)| [d.clone(), y.to_string(), c.to_string()])
        }),
    )
}

pub fn institutions_csv(s: &InstitutionStats) -> Vec<u8> {
    csv_bytes(
        &["institution", "papers"],
        s.counts.iter().map(|(i, c)| [i.clone(), c.to_string()]),
    )
}

pub fn topic_institutions_csv(s: &InstitutionStats) -> Vec<u8> {
    csv_bytes(
        &["topic_id", "institution", "papers"],
        s.topic_institution
            .iter()
            .flat_map(|(t, m)| m.iter().map(move |(i, c)| [t.to_string(), i.clone(), c.to_string()])),
    )
}

pub fn pairs_csv(s: &InstitutionStats) -> Vec<u8> {
    csv_bytes(
        &["institution_a", "institution_b", "papers"],
        s.pair_list()
            .map(|(a, b, c)| [a.to_string(), b.to_string(), c.to_string()]),
    )
}

pub fn topics_csv(topics: &[TopicEntry]) -> Vec<u8> {
    csv_bytes(
        &["topic_id", "name", "paper_count", "top_terms", "summary"],
        topics.iter().map(|t| {
            [
                t.id.to_string(),
                t.name.clone(),
                t.paper_count.to_string(),
                t.top_terms.join("; "),
                t.summary.clone(),
            ]
        }),
    )
}
