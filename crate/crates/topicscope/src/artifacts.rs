//! Stage outputs kept in the store directory.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use topicscope_core::cluster::{ClusterParams, Clustering, CondensedTree};
use topicscope_core::topics::{TopicSignature, TopicTree, VocabularyFilters};
use topicscope_core::vectorize::ReductionMethod;
use topicscope_core::Error;

use crate::error::{AppError, Result};
use crate::fsutil::read_json;

pub const VECTORS_FILE: &str = "vectors.jsonl";
pub const REDUCED_FILE: &str = "reduced.jsonl";
pub const VECTORIZE_FILE: &str = "vectorize.json";
pub const CLUSTERING_FILE: &str = "clustering.json";
pub const TOPICS_FILE: &str = "topics.json";
pub const TOPIC_TREE_FILE: &str = "topic_tree.json";
pub const ANALYTICS_CONFIG_FILE: &str = "analytics_config.json";
pub const ANALYTICS_DIR: &str = "analytics";

/// Settings of the vectorize stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorizeInfo {
    pub dims: usize,
    /// Embeddings came from a vector file rather than the hashing embedder.
    pub imported: Option<String>,
    pub reduce: ReductionMethod,
    pub n_components: usize,
    pub seed: u64,
    pub reduced_dim: usize,
    pub zero_text: usize,
    /// Leading covariance eigenvalues when reduced by PCA.
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringFile {
    pub params: ClusterParams,
    pub n_clusters: usize,
    pub noise_count: usize,
    pub sizes: Vec<usize>,
    /// Condensed-tree node of each cluster id.
    pub selected: Vec<usize>,
    pub labels: BTreeMap<String, i64>,
    /// Point indices follow the store's record order.
    pub tree: CondensedTree,
}

impl ClusteringFile {
    pub fn new(c: &Clustering, tree: &CondensedTree) -> Self {
        ClusteringFile {
            params: c.params,
            n_clusters: c.n_clusters(),
            noise_count: c.noise_count(),
            sizes: c.sizes(),
            selected: c.selected.clone(),
            labels: c.ids.iter().cloned().zip(c.labels.iter().copied()).collect(),
            tree: tree.clone(),
        }
    }

    /// The clustering in the order of `ids`.
    pub fn clustering(&self, ids: &[String]) -> Result<Clustering> {
        if ids.len() != self.labels.len() {
            return Err(AppError::Core(Error::Consistency(format!(
                "clustering covers {} records, the store holds {}; re-run `cluster`",
                self.labels.len(),
                ids.len()
            ))));
        }
        let labels = ids
            .iter()
            .map(|id| {
                self.labels.get(id).copied().ok_or_else(|| {
                    AppError::Core(Error::Consistency(format!(
                        "record {id} is not in the clustering; re-run `cluster`"
                    )))
                })
            })
            .collect::<Result<_>>()?;
        Ok(Clustering {
            ids: ids.to_vec(),
            labels,
            selected: self.selected.clone(),
            params: self.params,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicEntry {
    pub id: i64,
    pub name: String,
    pub summary: String,
    pub top_terms: Vec<String>,
    pub paper_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicsFile {
    pub filters: VocabularyFilters,
    pub vocabulary_size: usize,
    pub min_df: usize,
    pub topics: Vec<TopicEntry>,
}

impl TopicsFile {
    pub fn entries(sigs: &[TopicSignature], sizes: &[usize]) -> Vec<TopicEntry> {
        sigs.iter()
            .map(|s| TopicEntry {
                id: s.topic_id,
                name: s.name.clone(),
                summary: s.summary.clone(),
                top_terms: s.top_terms.clone(),
                paper_count: sizes.get(s.topic_id as usize).copied().unwrap_or(0),
            })
            .collect()
    }
}

fn load<T: serde::de::DeserializeOwned>(dir: &Path, file: &str, what: &'static str, stage: &'static str) -> Result<T> {
    let path = dir.join(file);
    if !path.exists() {
        return Err(AppError::MissingStage { what, stage });
    }
    read_json(&path)
}

pub fn load_vectorize_info(dir: &Path) -> Result<VectorizeInfo> {
    load(dir, VECTORIZE_FILE, "vectors", "vectorize")
}

pub fn load_clustering(dir: &Path) -> Result<ClusteringFile> {
    load(dir, CLUSTERING_FILE, "clustering", "cluster")
}

pub fn load_topics(dir: &Path) -> Result<TopicsFile> {
    load(dir, TOPICS_FILE, "topics", "topics")
}

pub fn load_topic_tree(dir: &Path) -> Result<TopicTree> {
    load(dir, TOPIC_TREE_FILE, "topic tree", "topics")
}
