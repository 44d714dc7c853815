//! Full-scan reference for filtered multi-field retrieval over a random
//! corpus.

#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use topicscope_core::corpus::{MetadataFilter, PaperRecord, YearSpec};
use topicscope_core::retrieval::{PlanEntry, QueryPlan, SearchField};
use topicscope_core::vectorize::embed_document;

const WORDS: &[&str] = &[
    "graph",
    "neural",
    "diffusion",
    "speech",
    "reward",
    "policy",
    "latent",
    "token",
    "attention",
    "kernel",
    "sparse",
    "robust",
    "benchmark",
    "cache",
    "storage",
    "privacy",
    "federated",
    "vision",
    "language",
    "alignment",
    "retrieval",
    "causal",
    "bayesian",
    "convex",
    "pruning",
    "quantization",
    "distillation",
    "contrastive",
    "segmentation",
    "tracking",
];
const VENUES: &[&str] = &["ICLR", "NeurIPS", "ICML", "ACL", "CVPR", "OSDI", "AAAI"];
pub const FIELDS: &[SearchField] = &[
    SearchField::AbstractSummary,
    SearchField::Methods,
    SearchField::Datasets,
    SearchField::Architecture,
    SearchField::Limitations,
    SearchField::Keywords,
];
pub const DIM: usize = 256;

fn text(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> String {
    let n = rng.random_range(lo..=hi);
    (0..n)
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn corpus(rng: &mut ChaCha8Rng) -> Vec<PaperRecord> {
    (0..1000)
        .map(|i| {
            let mut r = PaperRecord::new(format!("Paper {i} {}", text(rng, 1, 3)), rng.random_range(2018..=2025));
            r.record_id = format!("r{i:04}");
            r.conference = VENUES.choose(rng).unwrap().to_string();
            r.authors = (0..rng.random_range(1..=3))
                .map(|_| format!("Author {}", rng.random_range(0..60)))
                .collect();
            r.keywords = (0..rng.random_range(0..=3))
                .map(|_| WORDS.choose(rng).unwrap().to_string())
                .collect();
            r.abstract_summary = text(rng, 0, 40);
            r.methods = text(rng, 0, 10);
            r.architecture = text(rng, 0, 12);
            r.datasets = (0..rng.random_range(0..=2))
                .map(|_| WORDS.choose(rng).unwrap().to_uppercase())
                .collect();
            r.limitations = (0..rng.random_range(0..=2)).map(|_| text(rng, 2, 6)).collect();
            r
        })
        .collect()
}

pub fn random_plan(rng: &mut ChaCha8Rng) -> QueryPlan {
    let mut fields: Vec<SearchField> = FIELDS.to_vec();
    let n = rng.random_range(1..=4);
    let mut picked = Vec::new();
    for _ in 0..n {
        picked.push(fields.remove(rng.random_range(0..fields.len())));
    }
    let raw: Vec<f64> = picked.iter().map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut metadata = MetadataFilter::default();
    match rng.random_range(0..6) {
        0 => {}
        1 => {
            metadata.conferences = (0..rng.random_range(1..=3))
                .map(|_| VENUES.choose(rng).unwrap().to_string())
                .collect()
        }
        2 => {
            let from = rng.random_range(2018..=2025);
            metadata.years = Some(YearSpec::Range {
                from,
                to: rng.random_range(from..=2025),
            });
        }
        3 => metadata.years = Some(YearSpec::Set((0..3).map(|_| rng.random_range(2018..=2025)).collect())),
        4 => metadata.authors = vec![format!("author {}", rng.random_range(0..60))],
        _ => {
            metadata.keywords = vec![WORDS.choose(rng).unwrap().to_uppercase()];
            metadata.conferences = vec![VENUES.choose(rng).unwrap().to_string()];
        }
    }
    QueryPlan {
        metadata,
        field_texts: picked.iter().map(|&f| (f, text(rng, 1, 6))).collect(),
        vector_search_plan: picked
            .iter()
            .zip(&raw)
            .map(|(&field, w)| PlanEntry {
                field,
                weight: w / total,
            })
            .collect(),
        k: rng.random_range(1..=40),
    }
}

fn passes(r: &PaperRecord, m: &MetadataFilter) -> bool {
    let lower = |s: &str| s.to_lowercase();
    (m.conferences.is_empty() || m.conferences.contains(&r.conference))
        && m.years.as_ref().map_or(true, |y| match y {
            YearSpec::Range { from, to } => *from <= r.year && r.year <= *to,
            YearSpec::Set(s) => s.contains(&r.year),
        })
        && (m.authors.is_empty()
            || m.authors
                .iter()
                .any(|q| r.authors.iter().any(|a| lower(a).contains(&lower(q)))))
        && (m.keywords.is_empty()
            || m.keywords
                .iter()
                .any(|q| r.keywords.iter().any(|k| lower(k) == lower(q))))
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

pub fn full_scan(records: &[PaperRecord], plan: &QueryPlan) -> Vec<(String, f64)> {
    let mut out: Vec<(String, f64)> = records
        .iter()
        .filter(|r| passes(r, &plan.metadata))
        .map(|r| {
            let score = plan
                .vector_search_plan
                .iter()
                .map(|e| {
                    let q = embed_document(&plan.field_texts[&e.field], DIM).unwrap().values;
                    let d = embed_document(&e.field.record_text(r), DIM).unwrap().values;
                    e.weight * cosine(&q, &d)
                })
                .sum();
            (r.record_id.clone(), score)
        })
        .collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    out.truncate(plan.k);
    out
}
