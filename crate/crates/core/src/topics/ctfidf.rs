use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Vocabulary;
use crate::cluster::Clustering;
use crate::text::terms;
use crate::{Error, Result};

/// Number of top terms kept on each signature.
pub const DEFAULT_TOP_K: usize = 10;

/// Keyword signature of one topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSignature {
    pub topic_id: i64,
    /// Non-zero class-based TF-IDF weights; absent terms weigh 0.
    pub weights: BTreeMap<String, f64>,
    pub top_terms: Vec<String>,
    pub name: String,
    pub summary: String,
    /// Raw term counts of the class, before weighting.
    #[serde(skip)]
    pub term_counts: BTreeMap<String, f64>,
}

impl TopicSignature {
    pub fn weight(&self, term: &str) -> f64 {
        self.weights.get(term).copied().unwrap_or(0.0)
    }
}

/// Class-based TF-IDF: `w(t, c) = tf(t, c) · ln(1 + A / tf(t))`, where
/// `tf(t, c)` counts vocabulary term `t` in the documents of cluster `c`,
/// `tf(t)` sums it over all clusters and `A` is the mean number of counted
/// terms per cluster. `docs[i]` is the text of point `i` of `clusters`.
///
/// Returns one signature per cluster id, in id order, with
/// [`DEFAULT_TOP_K`] top terms filled in.
pub fn ctfidf_weights<S: AsRef<str>>(
    clusters: &Clustering,
    vocab: &Vocabulary,
    docs: &[S],
) -> Result<Vec<TopicSignature>> {
    if docs.len() != clusters.labels.len() {
        return Err(Error::validation(
            "documents",
            alloc::format!("{} documents for {} labels", docs.len(), clusters.labels.len()),
        ));
    }
    let k = clusters.n_clusters();
    let mut class_counts: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); k];
    for (doc, &label) in docs.iter().zip(&clusters.labels) {
        if label < 0 {
            continue;
        }
        let counts = &mut class_counts[label as usize];
        for t in terms(doc.as_ref(), vocab.filters.ngram_range) {
            if let Some(idx) = vocab.index_of(&t) {
                *counts.entry(idx).or_insert(0.0) += 1.0;
            }
        }
    }
    Ok(weigh_classes(&class_counts, vocab))
}

fn weigh_classes(class_counts: &[BTreeMap<usize, f64>], vocab: &Vocabulary) -> Vec<TopicSignature> {
    let mut total = vec![0.0; vocab.len()];
    let mut all = 0.0;
    for counts in class_counts {
        for (&idx, &c) in counts {
            total[idx] += c;
            all += c;
        }
    }
    let avg = if class_counts.is_empty() {
        0.0
    } else {
        all / class_counts.len() as f64
    };
    class_counts
        .iter()
        .enumerate()
        .map(|(c, counts)| {
            let weights: BTreeMap<String, f64> = counts
                .iter()
                .map(|(&idx, &tf)| (vocab.terms[idx].clone(), tf * libm::log(1.0 + avg / total[idx])))
                .collect();
            let mut sig = TopicSignature {
                topic_id: c as i64,
                weights,
                top_terms: Vec::new(),
                name: String::new(),
                summary: String::new(),
                term_counts: counts.iter().map(|(&i, &v)| (vocab.terms[i].clone(), v)).collect(),
            };
            sig.top_terms = top_terms(&sig, DEFAULT_TOP_K);
            sig
        })
        .collect()
}

/// The `k` heaviest terms with positive weight; ties go to the
/// lexicographically smaller term.
pub fn top_terms(sig: &TopicSignature, k: usize) -> Vec<String> {
    let mut ranked: Vec<(&String, f64)> = sig
        .weights
        .iter()
        .filter(|(_, &w)| w > 0.0)
        .map(|(t, &w)| (t, w))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.into_iter().take(k).map(|(t, _)| t.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::ClusterParams;
    use crate::text::NgramRange;
    use crate::topics::{build_vocabulary, VocabularyFilters};
    use alloc::string::ToString;

    fn toy() -> (Clustering, Vec<&'static str>) {
        let docs = vec!["graph network", "graph model", "image diffusion", "image model"];
        let clustering = Clustering {
            ids: (0..4).map(|i| i.to_string()).collect(),
            labels: vec![0, 0, 1, 1],
            selected: vec![1, 2],
            params: ClusterParams::default(),
        };
        (clustering, docs)
    }

    fn unigram_filters() -> VocabularyFilters {
        VocabularyFilters {
            max_df_percent: 0.9,
            min_df_floor: 1,
            ngram_range: NgramRange::UNIGRAMS,
        }
    }

    #[test]
    fn hand_oracle() {
        // Class A: graph 2, network 1, model 1; class B: image 2,
        // diffusion 1, model 1. A = 8 terms / 2 classes = 4.
        let (c, docs) = toy();
        let vocab = build_vocabulary(&docs, &unigram_filters()).unwrap();
        let sigs = ctfidf_weights(&c, &vocab, &docs).unwrap();
        let ln3 = libm::log(3.0);
        assert!((sigs[0].weight("graph") - 2.0 * ln3).abs() < 1e-9);
        assert!((sigs[0].weight("graph") - 2.1972245773362196).abs() < 1e-9);
        assert!((sigs[0].weight("network") - libm::log(5.0)).abs() < 1e-12);
        assert!((sigs[0].weight("model") - ln3).abs() < 1e-12);
        assert_eq!(sigs[0].weight("image"), 0.0);
        assert_eq!(sigs[0].top_terms[0], "graph");
        assert_eq!(sigs[1].top_terms[0], "image");
        assert_eq!(top_terms(&sigs[0], 1), ["graph"]);
        assert!(top_terms(&sigs[0], 0).is_empty());
        assert_eq!(top_terms(&sigs[0], 99).len(), 3);
    }

    #[test]
    fn empty_class_has_empty_signature() {
        let (mut c, docs) = toy();
        c.selected.push(7);
        let vocab = build_vocabulary(&docs, &unigram_filters()).unwrap();
        let sigs = ctfidf_weights(&c, &vocab, &docs).unwrap();
        assert_eq!(sigs.len(), 3);
        assert!(sigs[2].weights.is_empty());
        assert!(top_terms(&sigs[2], 5).is_empty());
    }

    #[test]
    fn doubling_a_class_doubles_its_counts() {
        let (c, docs) = toy();
        let vocab = build_vocabulary(&docs, &unigram_filters()).unwrap();
        let base = ctfidf_weights(&c, &vocab, &docs).unwrap();
        let mut doubled_docs = docs.clone();
        doubled_docs.extend_from_slice(&docs[..2]);
        let mut doubled = c.clone();
        doubled.labels.extend_from_slice(&[0, 0]);
        doubled.ids.extend(["4".to_string(), "5".to_string()]);
        let sigs = ctfidf_weights(&doubled, &vocab, &doubled_docs).unwrap();
        for (t, v) in &base[0].term_counts {
            assert_eq!(sigs[0].term_counts[t], 2.0 * v);
        }
        assert_eq!(sigs[1].term_counts, base[1].term_counts);
    }

    #[test]
    fn misaligned_documents() {
        let (c, docs) = toy();
        let vocab = build_vocabulary(&docs, &unigram_filters()).unwrap();
        assert!(ctfidf_weights(&c, &vocab, &docs[..3]).is_err());
    }
}
