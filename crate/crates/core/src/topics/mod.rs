//! Topics from clusters: vocabulary, class-based TF-IDF signatures,
//! naming, the topic tree, and record tagging.

mod ctfidf;
mod naming;
mod tree;
mod vocab;

pub use ctfidf::{ctfidf_weights, top_terms, TopicSignature, DEFAULT_TOP_K};
pub use naming::{fallback_name, name_topic, name_topics, sample_abstracts, NamingOutcome, MAX_SAMPLE_ABSTRACTS};
pub use tree::{assign_topics, build_topic_tree, NodeKind, TopicNode, TopicTree, OUTLIERS_NAME};
pub use vocab::{build_vocabulary, effective_min_df, Vocabulary, VocabularyFilters};
