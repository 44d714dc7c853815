use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{PlanEntry, SearchField, SubQuery};
use crate::corpus::{filter_indices, PaperRecord};
use crate::vectorize::{cosine_similarity, embed_document, VectorSet};
use crate::{Error, Result};

/// Per-field embeddings of every record, aligned with the record slice
/// they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldIndex {
    pub dim: usize,
    pub fields: BTreeMap<SearchField, VectorSet>,
}

impl FieldIndex {
    fn check(&self, records: &[PaperRecord]) -> Result<()> {
        for (field, set) in &self.fields {
            if set.len() != records.len() || set.ids().iter().zip(records).any(|(id, r)| *id != r.record_id) {
                return Err(Error::Consistency(format!(
                    "{field} vectors are not aligned with the records"
                )));
            }
        }
        Ok(())
    }
}

/// Embeds each of `fields` of every record with the document embedder.
/// Empty fields become zero-text rows.
pub fn build_field_index(records: &[PaperRecord], fields: &[SearchField], dim: usize) -> Result<FieldIndex> {
    let ids: Vec<String> = records.iter().map(|r| r.record_id.clone()).collect();
    let mut out = BTreeMap::new();
    for &field in fields {
        let embed = |r: &PaperRecord| embed_document(&field.record_text(r), dim);
        #[cfg(feature = "parallel")]
        let rows: Vec<_> = {
            use rayon::prelude::*;
            records.par_iter().map(embed).collect::<Result<_>>()?
        };
        #[cfg(not(feature = "parallel"))]
        let rows: Vec<_> = records.iter().map(embed).collect::<Result<_>>()?;
        let flags = rows.iter().map(|e| e.zero_text).collect();
        let rows = rows.into_iter().map(|e| e.values).collect();
        out.insert(
            field,
            VectorSet::new(ids.clone(), dim, rows, flags, crate::vectorize::Space::Embedding)?,
        );
    }
    Ok(FieldIndex { dim, fields: out })
}

/// `Σ w_j · s_j`.
pub fn weighted_score(weights: &[f64], sims: &[f64]) -> f64 {
    weights.iter().zip(sims).map(|(w, s)| w * s).sum()
}

/// Scores one record: `s_j` is the cosine between the query and record
/// vectors of planned field `j`, 0 when the record lacks the field.
/// `query[j]` and `doc[j]` belong to `plan[j]`.
pub fn score_document(plan: &[PlanEntry], query: &[Vec<f64>], doc: &[Option<&[f64]>]) -> (f64, Vec<f64>) {
    let sims: Vec<f64> = query
        .iter()
        .zip(doc)
        .map(|(q, d)| d.map_or(0.0, |d| cosine_similarity(q, d).value))
        .collect();
    let weights: Vec<f64> = plan.iter().map(|e| e.weight).collect();
    (weighted_score(&weights, &sims), sims)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub record_id: String,
    pub score: f64,
    pub similarities: BTreeMap<SearchField, f64>,
}

/// Top-k records of one sub-query, by score descending then record id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedResults {
    pub sub_query: usize,
    pub entries: Vec<RankedEntry>,
}

/// Filters `records` by the plan's metadata, scores every survivor and
/// keeps the best `k`.
pub fn retrieve(records: &[PaperRecord], index: &FieldIndex, sub: &SubQuery) -> Result<RankedResults> {
    index.check(records)?;
    let plan = &sub.plan;
    let mut query = Vec::with_capacity(plan.vector_search_plan.len());
    let mut sets = Vec::with_capacity(plan.vector_search_plan.len());
    for e in &plan.vector_search_plan {
        let set = index
            .fields
            .get(&e.field)
            .ok_or_else(|| Error::Consistency(format!("no vectors for field {}", e.field)))?;
        let text = plan.field_texts.get(&e.field).map(String::as_str).unwrap_or("");
        query.push(embed_document(text, index.dim)?.values);
        sets.push(set);
    }
    let candidates = filter_indices(records, &plan.metadata)?;
    let score = |&i: &usize| {
        let doc: Vec<Option<&[f64]>> = sets
            .iter()
            .map(|s| if s.is_zero_text(i) { None } else { Some(s.row(i)) })
            .collect();
        let (total, sims) = score_document(&plan.vector_search_plan, &query, &doc);
        RankedEntry {
            record_id: records[i].record_id.clone(),
            score: total,
            similarities: plan.vector_search_plan.iter().map(|e| e.field).zip(sims).collect(),
        }
    };
    #[cfg(feature = "parallel")]
    let mut entries: Vec<RankedEntry> = {
        use rayon::prelude::*;
        candidates.par_iter().map(score).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut entries: Vec<RankedEntry> = candidates.iter().map(score).collect();
    entries.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.record_id.cmp(&b.record_id)));
    entries.truncate(plan.k);
    Ok(RankedResults {
        sub_query: sub.index,
        entries,
    })
}
