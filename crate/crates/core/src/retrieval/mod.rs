//! Intent-driven retrieval: query plans, decomposition into sub-queries,
//! metadata filtering, weighted multi-field scoring and evidence bundles.

mod evidence;
mod plan;
mod score;

pub use evidence::{assemble_evidence, EvidenceBundle, EvidenceGroup, Excerpt, SubQueryEvidence};
pub use plan::{
    decompose_query, fallback_plan, parse_query_plan, plan_from_value, Decomposition, ParsedPlan, PlanEntry, QueryPlan,
    SearchField, SubQuery, DEFAULT_K, WEIGHT_TOLERANCE,
};
pub use score::{build_field_index, retrieve, score_document, weighted_score, FieldIndex, RankedEntry, RankedResults};
