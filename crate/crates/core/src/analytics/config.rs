use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};

use serde::{Deserialize, Serialize};

use super::Quadrant;
use crate::{Error, Result};

/// Which papers of a topic enter its mean publication year.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanYearScope {
    #[default]
    AllPapers,
    /// Only the two-year window ending at the reference year.
    Window,
}

/// Display label of each quadrant number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadrantLabels {
    pub first: String,
    pub second: String,
    pub third: String,
    pub fourth: String,
    pub new: String,
}

impl Default for QuadrantLabels {
    fn default() -> Self {
        QuadrantLabels {
            first: "Emerging".into(),
            second: "Booming".into(),
            third: "Mature".into(),
            fourth: "Declining".into(),
            new: "New".into(),
        }
    }
}

impl QuadrantLabels {
    pub fn label(&self, q: Quadrant) -> &str {
        match q {
            Quadrant::I => &self.first,
            Quadrant::II => &self.second,
            Quadrant::III => &self.third,
            Quadrant::IV => &self.fourth,
            Quadrant::New => &self.new,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalyticsConfig {
    /// Citation weight of the impact metric; paper counts get `1 - alpha`.
    pub alpha: f64,
    pub reference_year: i32,
    /// Growth threshold g₀ on the CAGR axis.
    pub growth_threshold: f64,
    /// Threshold y₀ on the normalized mean year; the median over topics
    /// when unset.
    pub year_threshold: Option<f64>,
    pub mean_year_scope: MeanYearScope,
    pub quadrant_labels: QuadrantLabels,
    /// GPU model → A100-equivalence factor. Keys match case-insensitively.
    pub gpu_table: BTreeMap<String, f64>,
    /// Dataset spelling → canonical name. Keys match case-insensitively.
    pub dataset_aliases: BTreeMap<String, String>,
}

impl Default for AnalyticsConfig {
    fn default() -> Self {
        let mut gpu_table = BTreeMap::new();
        gpu_table.insert("A100".to_string(), 1.0);
        AnalyticsConfig {
            alpha: 0.6,
            reference_year: 2025,
            growth_threshold: 0.0,
            year_threshold: None,
            mean_year_scope: MeanYearScope::AllPapers,
            quadrant_labels: QuadrantLabels::default(),
            gpu_table,
            dataset_aliases: BTreeMap::new(),
        }
    }
}

impl AnalyticsConfig {
    pub fn beta(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::validation("alpha", format!("{} is outside [0, 1]", self.alpha)));
        }
        if !self.growth_threshold.is_finite() {
            return Err(Error::validation("growth_threshold", "must be finite"));
        }
        if let Some(y) = self.year_threshold {
            if !(0.0..=1.0).contains(&y) {
                return Err(Error::validation("year_threshold", format!("{y} is outside [0, 1]")));
            }
        }
        for (model, &f) in &self.gpu_table {
            if !(f.is_finite() && f > 0.0) {
                return Err(Error::validation(
                    "gpu_table",
                    format!("factor {f} for {model} must be positive"),
                ));
            }
        }
        Ok(())
    }
}
