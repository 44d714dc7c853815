use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::PaperRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkShare {
    pub total: u64,
    pub benchmark: u64,
    pub share: f64,
}

/// Share of benchmark or dataset papers per year.
pub fn benchmark_share(records: &[PaperRecord]) -> BTreeMap<i32, BenchmarkShare> {
    let mut counts: BTreeMap<i32, (u64, u64)> = BTreeMap::new();
    for r in records {
        let e = counts.entry(r.year).or_insert((0, 0));
        e.0 += 1;
        if r.is_benchmark() {
            e.1 += 1;
        }
    }
    counts
        .into_iter()
        .map(|(y, (total, benchmark))| {
            (
                y,
                BenchmarkShare {
                    total,
                    benchmark,
                    share: benchmark as f64 / total as f64,
                },
            )
        })
        .collect()
}

/// Dataset → year → number of papers using it.
pub type DatasetUsage = BTreeMap<String, BTreeMap<i32, u64>>;

fn fold_key(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Tallies papers per dataset and year. Names are merged case-insensitively
/// and through `aliases`; an unaliased dataset is reported under its first
/// spelling in record order. A paper counts once per dataset.
pub fn dataset_usage(records: &[PaperRecord], aliases: &BTreeMap<String, String>) -> DatasetUsage {
    let aliases: BTreeMap<String, &String> = aliases.iter().map(|(k, v)| (fold_key(k), v)).collect();
    let mut display: BTreeMap<String, String> = BTreeMap::new();
    let mut out = DatasetUsage::new();
    for r in records {
        let mut seen = BTreeSet::new();
        for d in &r.datasets {
            let key = fold_key(d);
            if key.is_empty() {
                continue;
            }
            let name = match aliases.get(&key) {
                Some(canon) => (*canon).clone(),
                None => display.entry(key).or_insert_with(|| d.trim().to_string()).clone(),
            };
            if seen.insert(name.clone()) {
                *out.entry(name).or_default().entry(r.year).or_insert(0) += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstitutionStats {
    /// Papers per institution.
    pub counts: BTreeMap<String, u64>,
    /// Topic id → institution → papers.
    pub topic_institution: BTreeMap<i64, BTreeMap<String, u64>>,
    /// Unordered institution pairs: smaller name → larger name → papers.
    pub pairs: BTreeMap<String, BTreeMap<String, u64>>,
}

impl InstitutionStats {
    pub fn co_occurrence(&self, a: &str, b: &str) -> u64 {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.pairs.get(a).and_then(|m| m.get(b)).copied().unwrap_or(0)
    }

    /// Every counted pair as `(a, b, papers)` with `a < b`.
    pub fn pair_list(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.pairs
            .iter()
            .flat_map(|(a, m)| m.iter().map(move |(b, &c)| (a.as_str(), b.as_str(), c)))
    }

    /// Institutions in name order and their symmetric co-occurrence matrix.
    pub fn matrix(&self) -> (Vec<&str>, Vec<Vec<u64>>) {
        let names: Vec<&str> = self.counts.keys().map(String::as_str).collect();
        let pos: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut m = vec![vec![0; names.len()]; names.len()];
        for (a, b, c) in self.pair_list() {
            let (i, j) = (pos[a], pos[b]);
            m[i][j] += c;
            m[j][i] += c;
        }
        (names, m)
    }
}

/// Per-institution counts, topic × institution counts and co-authorship
/// pairs. Repeated institutions within a paper count once.
pub fn institution_stats(records: &[PaperRecord]) -> InstitutionStats {
    let mut out = InstitutionStats::default();
    for r in records {
        let insts: BTreeSet<&str> = r
            .institution
            .iter()
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .collect();
        for &i in &insts {
            *out.counts.entry(i.to_string()).or_insert(0) += 1;
            *out.topic_institution
                .entry(r.topic_id)
                .or_default()
                .entry(i.to_string())
                .or_insert(0) += 1;
        }
        let v: Vec<&str> = insts.into_iter().collect();
        for (k, a) in v.iter().enumerate() {
            for b in &v[k + 1..] {
                *out.pairs
                    .entry(a.to_string())
                    .or_default()
                    .entry(b.to_string())
                    .or_insert(0) += 1;
            }
        }
    }
    out
}
