use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{RankedResults, SearchField, SubQuery};
use crate::corpus::PaperRecord;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Excerpt {
    pub field: SearchField,
    pub text: String,
}

/// Matched field texts of one record with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceGroup {
    pub record_id: String,
    pub paper_name: String,
    pub conference: String,
    pub year: i32,
    pub score: f64,
    pub excerpts: Vec<Excerpt>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubQueryEvidence {
    pub index: usize,
    pub text: String,
    pub results: RankedResults,
    pub evidence: Vec<EvidenceGroup>,
}

/// Everything retrieved for one question, ready for display or for an
/// answering model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceBundle {
    pub question: String,
    pub sub_queries: Vec<SubQueryEvidence>,
}

/// Pairs each sub-query with its results and pulls the planned fields of
/// every returned record. `results[i]` answers `subs[i]`.
pub fn assemble_evidence(
    records: &[PaperRecord],
    subs: &[SubQuery],
    results: &[RankedResults],
    question: &str,
) -> Result<EvidenceBundle> {
    if subs.len() != results.len() {
        return Err(Error::Consistency(format!(
            "{} sub-queries but {} result lists",
            subs.len(),
            results.len()
        )));
    }
    let by_id: BTreeMap<&str, &PaperRecord> = records.iter().map(|r| (r.record_id.as_str(), r)).collect();
    let mut out = Vec::with_capacity(subs.len());
    for (sub, res) in subs.iter().zip(results) {
        let mut evidence = Vec::with_capacity(res.entries.len());
        for e in &res.entries {
            let r = by_id
                .get(e.record_id.as_str())
                .ok_or_else(|| Error::Consistency(format!("result names unknown record {}", e.record_id)))?;
            let excerpts = sub
                .plan
                .vector_search_plan
                .iter()
                .map(|p| Excerpt {
                    field: p.field,
                    text: p.field.record_text(r),
                })
                .filter(|x| !x.text.trim().is_empty())
                .collect();
            evidence.push(EvidenceGroup {
                record_id: r.record_id.clone(),
                paper_name: r.paper_name.clone(),
                conference: r.conference.clone(),
                year: r.year,
                score: e.score,
                excerpts,
            });
        }
        out.push(SubQueryEvidence {
            index: sub.index,
            text: sub.text.clone(),
            results: res.clone(),
            evidence,
        });
    }
    Ok(EvidenceBundle {
        question: String::from(question),
        sub_queries: out,
    })
}
