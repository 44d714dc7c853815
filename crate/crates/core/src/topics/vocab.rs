use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::text::{terms, NgramRange};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VocabularyFilters {
    /// Terms in more than this fraction of documents are dropped.
    pub max_df_percent: f64,
    /// Large-corpus document-frequency floor; see [`effective_min_df`].
    pub min_df_floor: usize,
    pub ngram_range: NgramRange,
}

impl Default for VocabularyFilters {
    fn default() -> Self {
        VocabularyFilters {
            max_df_percent: 0.9,
            min_df_floor: 50,
            ngram_range: NgramRange::UNI_BI,
        }
    }
}

/// `min(floor, max(2, ⌈0.005·n_docs⌉))`: the floor applies to large
/// corpora and shrinks with small ones.
pub fn effective_min_df(floor: usize, n_docs: usize) -> usize {
    let scaled = (n_docs * 5).div_ceil(1000);
    floor.min(scaled.max(2))
}

/// Retained terms with their document frequencies, sorted by term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub terms: Vec<String>,
    pub df: Vec<usize>,
    pub n_docs: usize,
    pub min_df: usize,
    pub filters: VocabularyFilters,
    #[serde(skip)]
    index: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        if self.index.is_empty() && !self.terms.is_empty() {
            return self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok();
        }
        self.index.get(term).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index_of(term).is_some()
    }
}

pub fn build_vocabulary<S: AsRef<str>>(docs: &[S], filters: &VocabularyFilters) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::validation("documents", "empty corpus"));
    }
    if !(filters.max_df_percent > 0.0 && filters.max_df_percent <= 1.0) {
        return Err(Error::validation("max_df", "must be in (0, 1]"));
    }
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for doc in docs {
        let unique: BTreeSet<String> = terms(doc.as_ref(), filters.ngram_range).into_iter().collect();
        for t in unique {
            *df.entry(t).or_insert(0) += 1;
        }
    }
    let n = docs.len();
    let min_df = effective_min_df(filters.min_df_floor, n);
    let max_df = filters.max_df_percent * n as f64;
    let mut vocab = Vocabulary {
        terms: Vec::new(),
        df: Vec::new(),
        n_docs: n,
        min_df,
        filters: *filters,
        index: BTreeMap::new(),
    };
    for (term, count) in df {
        if count >= min_df && count as f64 <= max_df {
            vocab.index.insert(term.clone(), vocab.terms.len());
            vocab.terms.push(term);
            vocab.df.push(count);
        }
    }
    Ok(vocab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    #[test]
    fn min_df_scaling() {
        assert_eq!(effective_min_df(50, 4), 2);
        assert_eq!(effective_min_df(50, 2000), 10);
        assert_eq!(effective_min_df(50, 100_000), 50);
        assert_eq!(effective_min_df(1, 100_000), 1);
    }

    #[test]
    fn frequent_terms_are_dropped() {
        let docs: Vec<String> = (0..100)
            .map(|i| {
                if i < 95 {
                    format!("common w{}", i % 10)
                } else {
                    format!("w{}", i % 10)
                }
            })
            .collect();
        let f = VocabularyFilters {
            min_df_floor: 2,
            ngram_range: NgramRange::UNIGRAMS,
            ..Default::default()
        };
        let v = build_vocabulary(&docs, &f).unwrap();
        assert!(!v.contains("common"));
        assert!(v.contains("w3"));
    }

    #[test]
    fn singletons_fall_below_floor() {
        let docs = ["alpha beta", "alpha gamma", "delta"];
        let f = VocabularyFilters {
            min_df_floor: 2,
            ..Default::default()
        };
        let v = build_vocabulary(&docs, &f).unwrap();
        assert_eq!(v.terms, vec!["alpha"]);
        assert_eq!(v.df, vec![2]);
    }

    #[test]
    fn six_document_toy_corpus() {
        // Hand count (min_df 2, max_df 0.9·6 = 5.4): graph 3, neural 3,
        // network 4, model 6 (over max_df), image 3, diffusion 2,
        // "graph neural" 3, "neural network" 2, "network model" 3,
        // "image diffusion" 2, "diffusion model" 2; the rest occur once.
        let docs = [
            "graph neural network model",
            "graph neural network model",
            "graph neural model",
            "image diffusion model",
            "image diffusion model network",
            "image network model",
        ];
        let f = VocabularyFilters {
            min_df_floor: 50,
            ..Default::default()
        };
        let v = build_vocabulary(&docs, &f).unwrap();
        assert_eq!(v.min_df, 2);
        assert_eq!(
            v.terms,
            vec![
                "diffusion",
                "diffusion model",
                "graph",
                "graph neural",
                "image",
                "image diffusion",
                "network",
                "network model",
                "neural",
                "neural network",
            ]
        );
        assert_eq!(v.df[v.index_of("network").unwrap()], 4);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        let docs: [&str; 0] = [];
        assert!(build_vocabulary(&docs, &VocabularyFilters::default()).is_err());
    }
}
