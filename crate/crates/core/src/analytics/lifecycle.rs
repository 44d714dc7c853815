use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{AnalyticsConfig, MeanYearScope};
use crate::corpus::PaperRecord;
use crate::{Error, Result};

/// Papers and citations of one topic per year; absent years count 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicYearSeries {
    pub topic_id: i64,
    pub counts: BTreeMap<i32, u64>,
    pub citations: BTreeMap<i32, u64>,
}

impl TopicYearSeries {
    pub fn count(&self, year: i32) -> u64 {
        self.counts.get(&year).copied().unwrap_or(0)
    }

    pub fn citations_in(&self, year: i32) -> u64 {
        self.citations.get(&year).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Per-topic year series of topic-tagged records; noise is left out.
pub fn topic_year_counts(records: &[PaperRecord]) -> BTreeMap<i64, TopicYearSeries> {
    let mut out: BTreeMap<i64, TopicYearSeries> = BTreeMap::new();
    for r in records.iter().filter(|r| r.topic_id >= 0) {
        let s = out.entry(r.topic_id).or_insert_with(|| TopicYearSeries {
            topic_id: r.topic_id,
            ..Default::default()
        });
        *s.counts.entry(r.year).or_insert(0) += 1;
        *s.citations.entry(r.year).or_insert(0) += r.citations;
    }
    out
}

/// Two-year compound growth `(N_t / N_{t-2})^{1/2} - 1`; `None` when the
/// topic had no papers at `t - 2`.
pub fn cagr(series: &TopicYearSeries, t: i32) -> Option<f64> {
    let base = series.count(t - 2);
    if base == 0 {
        return None;
    }
    Some(libm::sqrt(series.count(t) as f64 / base as f64) - 1.0)
}

/// Mean publication year and its min-max position within `year_range`.
/// A single-year range maps to 0.
pub fn normalized_mean_year(series: &TopicYearSeries, year_range: (i32, i32)) -> Result<(f64, f64)> {
    let n = series.total();
    if n == 0 {
        return Err(Error::validation(
            "topic",
            format!("topic {} has no papers", series.topic_id),
        ));
    }
    let sum: f64 = series.counts.iter().map(|(&y, &c)| y as f64 * c as f64).sum();
    let mean = sum / n as f64;
    let (lo, hi) = year_range;
    let norm = if hi > lo {
        ((mean - lo as f64) / (hi - lo) as f64).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok((mean, norm))
}

/// `W_i = (α C_i + β T_i) / max_j (α C_j + β T_j)`. All `None` when the
/// maximum is not positive.
pub fn weighted_impact(citations: &[f64], counts: &[f64], alpha: f64) -> Vec<Option<f64>> {
    let raw: Vec<f64> = citations
        .iter()
        .zip(counts)
        .map(|(c, t)| alpha * c + (1.0 - alpha) * t)
        .collect();
    let max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_nan() || max <= 0.0 {
        return alloc::vec![None; raw.len()];
    }
    raw.iter().map(|r| Some(r / max)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quadrant {
    I,
    II,
    III,
    IV,
    New,
}

/// Quadrant of a topic by growth and recency. Values equal to a threshold
/// count as at or above it.
pub fn assign_quadrant(cagr: Option<f64>, mean_year_norm: f64, growth_threshold: f64, year_threshold: f64) -> Quadrant {
    let Some(g) = cagr else { return Quadrant::New };
    match (g >= growth_threshold, mean_year_norm >= year_threshold) {
        (true, true) => Quadrant::I,
        (false, true) => Quadrant::II,
        (false, false) => Quadrant::III,
        (true, false) => Quadrant::IV,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifecycleMetrics {
    pub topic_id: i64,
    pub name: String,
    pub cagr: Option<f64>,
    pub mean_year: f64,
    pub mean_year_norm: f64,
    /// Papers in the two-year window ending at the reference year.
    pub n_recent: u64,
    /// Citations of those papers.
    pub citations_recent: u64,
    pub impact_raw: f64,
    pub impact_norm: Option<f64>,
    pub quadrant: Quadrant,
    pub quadrant_label: String,
}

fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return 0.5;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

/// Lifecycle metrics of every topic in `records`, in topic id order.
/// The year range for normalization is that of the whole corpus.
pub fn lifecycle_metrics(
    records: &[PaperRecord],
    names: &BTreeMap<i64, String>,
    config: &AnalyticsConfig,
) -> Result<Vec<LifecycleMetrics>> {
    config.validate()?;
    let t = config.reference_year;
    let Some(lo) = records.iter().map(|r| r.year).min() else {
        return Ok(Vec::new());
    };
    let hi = records.iter().map(|r| r.year).max().unwrap_or(lo);
    let series = topic_year_counts(records);

    let mut out = Vec::with_capacity(series.len());
    for s in series.values() {
        let (mean_year, mean_year_norm) = match config.mean_year_scope {
            MeanYearScope::AllPapers => normalized_mean_year(s, (lo, hi))?,
            MeanYearScope::Window => {
                let mut w = s.clone();
                w.counts.retain(|&y, _| y == t || y == t - 1);
                if w.total() == 0 {
                    normalized_mean_year(s, (lo, hi))?
                } else {
                    normalized_mean_year(&w, (lo, hi))?
                }
            }
        };
        let n_recent = s.count(t) + s.count(t - 1);
        let citations_recent = s.citations_in(t) + s.citations_in(t - 1);
        out.push(LifecycleMetrics {
            topic_id: s.topic_id,
            name: names.get(&s.topic_id).cloned().unwrap_or_default(),
            cagr: cagr(s, t),
            mean_year,
            mean_year_norm,
            n_recent,
            citations_recent,
            impact_raw: config.alpha * citations_recent as f64 + config.beta() * n_recent as f64,
            impact_norm: None,
            quadrant: Quadrant::New,
            quadrant_label: String::new(),
        });
    }

    let c: Vec<f64> = out.iter().map(|m| m.citations_recent as f64).collect();
    let n: Vec<f64> = out.iter().map(|m| m.n_recent as f64).collect();
    let y0 = config
        .year_threshold
        .unwrap_or_else(|| median(out.iter().map(|m| m.mean_year_norm).collect()));
    for (m, w) in out.iter_mut().zip(weighted_impact(&c, &n, config.alpha)) {
        m.impact_norm = w;
        m.quadrant = assign_quadrant(m.cagr, m.mean_year_norm, config.growth_threshold, y0);
        m.quadrant_label = config.quadrant_labels.label(m.quadrant).into();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn series(pairs: &[(i32, u64)]) -> TopicYearSeries {
        TopicYearSeries {
            topic_id: 0,
            counts: pairs.iter().copied().collect(),
            citations: BTreeMap::new(),
        }
    }

    #[test]
    fn growth_rates() {
        assert_eq!(cagr(&series(&[(2023, 50), (2025, 200)]), 2025), Some(1.0));
        assert_eq!(cagr(&series(&[(2023, 7), (2025, 7)]), 2025), Some(0.0));
        // sqrt(1.25) - 1
        let g = cagr(&series(&[(2023, 80), (2025, 100)]), 2025).unwrap();
        assert!((g - 0.118_033_988_749_894_9).abs() < 1e-8);
        assert_eq!(cagr(&series(&[(2025, 9)]), 2025), None);
    }

    #[test]
    fn mean_years() {
        assert_eq!(
            normalized_mean_year(&series(&[(2025, 4)]), (2020, 2025)).unwrap(),
            (2025.0, 1.0)
        );
        assert_eq!(
            normalized_mean_year(&series(&[(2020, 4)]), (2020, 2025)).unwrap(),
            (2020.0, 0.0)
        );
        let (m, n) = normalized_mean_year(&series(&[(2021, 1), (2023, 1)]), (2020, 2025)).unwrap();
        assert_eq!(m, 2022.0);
        assert!((n - 0.4).abs() < 1e-12);
        assert!(normalized_mean_year(&series(&[]), (2020, 2025)).is_err());
        assert_eq!(
            normalized_mean_year(&series(&[(2022, 1)]), (2022, 2022)).unwrap().1,
            0.0
        );
    }

    #[test]
    fn impact() {
        assert_eq!(weighted_impact(&[3.0], &[2.0], 0.6), vec![Some(1.0)]);
        let w = weighted_impact(&[100.0, 50.0], &[10.0, 20.0], 0.6);
        assert_eq!(w[0], Some(1.0));
        assert!((w[1].unwrap() - 0.59375).abs() < 1e-12);
        let scaled = weighted_impact(&[300.0, 150.0], &[30.0, 60.0], 0.6);
        assert!((scaled[1].unwrap() - w[1].unwrap()).abs() < 1e-12);
        assert_eq!(weighted_impact(&[0.0, 0.0], &[0.0, 0.0], 0.6), vec![None, None]);
    }

    #[test]
    fn quadrants() {
        assert_eq!(assign_quadrant(Some(0.5), 0.9, 0.0, 0.5), Quadrant::I);
        assert_eq!(assign_quadrant(Some(-0.2), 0.9, 0.0, 0.5), Quadrant::II);
        assert_eq!(assign_quadrant(Some(-0.2), 0.1, 0.0, 0.5), Quadrant::III);
        assert_eq!(assign_quadrant(Some(0.2), 0.1, 0.0, 0.5), Quadrant::IV);
        assert_eq!(assign_quadrant(Some(0.0), 0.5, 0.0, 0.5), Quadrant::I);
        assert_eq!(assign_quadrant(None, 0.5, 0.0, 0.5), Quadrant::New);
        assert_eq!(
            AnalyticsConfig::default().quadrant_labels.label(Quadrant::III),
            "Mature"
        );
    }

    fn rec(topic: i64, year: i32, citations: u64) -> PaperRecord {
        let mut r = PaperRecord::new("t", year);
        r.topic_id = topic;
        r.citations = citations;
        r
    }

    #[test]
    fn year_counts() {
        let recs = vec![
            rec(0, 2024, 1),
            rec(0, 2024, 2),
            rec(0, 2024, 3),
            rec(-1, 2024, 9),
            rec(1, 2023, 4),
        ];
        let s = topic_year_counts(&recs);
        assert_eq!(s.len(), 2);
        assert_eq!(s[&0].count(2024), 3);
        assert_eq!(s[&0].citations_in(2024), 6);
        assert_eq!(s[&1].count(2024), 0);
    }

    #[test]
    fn full_metrics() {
        let mut recs = Vec::new();
        for _ in 0..50 {
            recs.push(rec(0, 2023, 1));
        }
        for _ in 0..200 {
            recs.push(rec(0, 2025, 2));
        }
        for _ in 0..40 {
            recs.push(rec(1, 2021, 5));
        }
        for _ in 0..10 {
            recs.push(rec(1, 2025, 0));
        }
        let m = lifecycle_metrics(&recs, &BTreeMap::new(), &AnalyticsConfig::default()).unwrap();
        assert_eq!(m[0].cagr, Some(1.0));
        assert_eq!(m[1].cagr, None);
        assert_eq!(m[1].quadrant_label, "New");
        assert_eq!(m[0].n_recent, 200);
        assert_eq!(m[0].citations_recent, 400);
        assert_eq!(m[0].impact_norm, Some(1.0));
        assert!(m.iter().all(|x| (0.0..=1.0).contains(&x.mean_year_norm)));
    }
}
