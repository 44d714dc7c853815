use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::PaperRecord;
use crate::{Error, Result};

/// Training compute of one paper: `count` GPUs of `model` for `hours`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComputeRecord {
    pub gpu_count: u32,
    pub gpu_model: String,
    pub hours: f64,
}

/// Reads `<count>*<model>*<hours>`. Empty text means no compute info;
/// anything else that does not fit is a parse error.
pub fn parse_gpu_info(text: &str) -> Result<Option<ComputeRecord>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(None);
    }
    let bad = |m: &str| Error::Parse {
        offset: 0,
        message: format!("gpu info {text:?}: {m}"),
    };
    let parts: Vec<&str> = text.split('*').map(str::trim).collect();
    let [count, model, hours] = parts[..] else {
        return Err(bad("expected <count>*<model>*<hours>"));
    };
    let gpu_count: u32 = count.parse().map_err(|_| bad("count is not an integer"))?;
    if gpu_count == 0 {
        return Err(bad("count must be positive"));
    }
    if model.is_empty() || model.chars().any(char::is_whitespace) {
        return Err(bad("model must be a single token"));
    }
    let hours: f64 = hours.parse().map_err(|_| bad("hours is not a number"))?;
    if !(hours.is_finite() && hours > 0.0) {
        return Err(bad("hours must be positive"));
    }
    Ok(Some(ComputeRecord {
        gpu_count,
        gpu_model: model.to_string(),
        hours,
    }))
}

/// `count · hours · factor(model)`, or `None` for models missing from
/// `table`. Non-positive factors are a configuration error.
pub fn a100_equiv_hours(rec: &ComputeRecord, table: &BTreeMap<String, f64>) -> Result<Option<f64>> {
    let Some((_, &factor)) = table.iter().find(|(k, _)| k.eq_ignore_ascii_case(&rec.gpu_model)) else {
        return Ok(None);
    };
    if !(factor.is_finite() && factor > 0.0) {
        return Err(Error::validation(
            "gpu_table",
            format!("factor {factor} for {} must be positive", rec.gpu_model),
        ));
    }
    Ok(Some(rec.gpu_count as f64 * rec.hours * factor))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComputeRow {
    pub record_id: String,
    pub year: i32,
    pub topic_id: i64,
    pub compute: ComputeRecord,
    /// `None` when the GPU model has no conversion factor.
    pub a100_equiv_hours: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ComputeSummary {
    pub rows: Vec<ComputeRow>,
    /// Resolved A100-equivalent hours per year.
    pub per_year: BTreeMap<i32, f64>,
    /// Rows left out of `per_year` for lack of a factor.
    pub unresolved: usize,
    pub warnings: Vec<String>,
}

/// Parses and converts the compute info of every record.
pub fn compute_usage(records: &[PaperRecord], table: &BTreeMap<String, f64>) -> Result<ComputeSummary> {
    let mut out = ComputeSummary::default();
    for r in records {
        let parsed = match parse_gpu_info(&r.gpu_info) {
            Ok(Some(c)) => c,
            Ok(None) => continue,
            Err(e) => {
                out.warnings.push(format!("{}: {e}", r.record_id));
                continue;
            }
        };
        let hours = a100_equiv_hours(&parsed, table)?;
        match hours {
            Some(h) => *out.per_year.entry(r.year).or_insert(0.0) += h,
            None => out.unresolved += 1,
        }
        out.rows.push(ComputeRow {
            record_id: r.record_id.clone(),
            year: r.year,
            topic_id: r.topic_id,
            compute: parsed,
            a100_equiv_hours: hours,
        });
    }
    Ok(out)
}
