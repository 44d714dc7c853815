//! Vector exchange format: a header line `{"dim":D,"count":N}` followed by
//! one `{"id":..,"v":[..]}` line per vector. Values are written with 9
//! significant digits. Lines may carry `"zero_text":true` to mark rows
//! without text.

use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;
use topicscope_core::vectorize::{l2_norm, Space, VectorSet};
use topicscope_core::Error;

use crate::error::Result;
use crate::fsutil::{read_text, write_file};

/// Rounds to 9 significant digits.
pub fn round_sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float")
}

pub fn format_vectors(set: &VectorSet) -> String {
    let mut out = format!("{{\"dim\":{},\"count\":{}}}\n", set.dim(), set.len());
    for (i, id) in set.ids().iter().enumerate() {
        out.push_str("{\"id\":");
        out.push_str(&serde_json::to_string(id).expect("string"));
        out.push_str(",\"v\":[");
        for (k, x) in set.row(i).iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&serde_json::to_string(&round_sig9(*x)).expect("finite"));
        }
        out.push(']');
        if set.is_zero_text(i) {
            out.push_str(",\"zero_text\":true");
        }
        out.push_str("}\n");
    }
    out
}

pub fn write_vectors(path: &Path, set: &VectorSet) -> Result<()> {
    write_file(path, format_vectors(set).as_bytes())
}

#[derive(Deserialize)]
struct Header {
    dim: usize,
    count: usize,
}

#[derive(Deserialize)]
struct Line {
    id: String,
    v: Vec<f64>,
    #[serde(default)]
    zero_text: bool,
}

/// Rows of a vector file in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFile {
    pub dim: usize,
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub zero_text: Vec<bool>,
}

fn parse_error(line: usize, message: impl std::fmt::Display) -> Error {
    Error::Parse {
        offset: 0,
        message: format!("vector file line {line}: {message}"),
    }
}

pub fn parse_vector_file(text: &str) -> Result<VectorFile> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| parse_error(1, "missing header"))?;
    let header: Header = serde_json::from_str(first).map_err(|e| parse_error(1, e))?;
    let mut out = VectorFile {
        dim: header.dim,
        ids: Vec::new(),
        rows: Vec::new(),
        zero_text: Vec::new(),
    };
    for (i, text) in lines {
        let line: Line = serde_json::from_str(text).map_err(|e| parse_error(i + 1, e))?;
        if line.v.len() != header.dim {
            return Err(Error::Validation {
                field: line.id,
                message: format!("{} values, header says {}", line.v.len(), header.dim),
            }
            .into());
        }
        out.ids.push(line.id);
        out.rows.push(line.v);
        out.zero_text.push(line.zero_text);
    }
    if out.ids.len() != header.count {
        return Err(Error::Validation {
            field: "count".into(),
            message: format!("header says {} vectors, file has {}", header.count, out.ids.len()),
        }
        .into());
    }
    Ok(out)
}

/// Reorders `file` to `expected` ids, failing on the first id that is
/// missing, repeated or unexpected.
fn align(file: VectorFile, expected: &[String]) -> Result<VectorFile> {
    let mut pos: HashMap<&str, usize> = HashMap::with_capacity(file.ids.len());
    for (i, id) in file.ids.iter().enumerate() {
        if pos.insert(id, i).is_some() {
            return Err(Error::Validation {
                field: id.clone(),
                message: "id appears twice".into(),
            }
            .into());
        }
    }
    let mut out = VectorFile {
        dim: file.dim,
        ids: Vec::new(),
        rows: Vec::new(),
        zero_text: Vec::new(),
    };
    for id in expected {
        let Some(&i) = pos.get(id.as_str()) else {
            return Err(Error::Validation {
                field: id.clone(),
                message: "id missing from vector file".into(),
            }
            .into());
        };
        out.ids.push(id.clone());
        out.rows.push(file.rows[i].clone());
        out.zero_text.push(file.zero_text[i]);
    }
    if file.ids.len() != expected.len() {
        let extra = file
            .ids
            .iter()
            .find(|id| !expected.contains(id))
            .expect("an unexpected id");
        return Err(Error::Validation {
            field: extra.clone(),
            message: "id not in the store".into(),
        }
        .into());
    }
    Ok(out)
}

/// Loads externally computed embeddings for `expected` ids. Rows are
/// rescaled to unit length; all-zero rows are flagged as zero-text.
pub fn import_vectors(path: &Path, expected: &[String]) -> Result<VectorSet> {
    let file = align(parse_vector_file(&read_text(path)?)?, expected)?;
    let mut rows = file.rows;
    let mut flags = file.zero_text;
    for (row, flag) in rows.iter_mut().zip(&mut flags) {
        let n = l2_norm(row);
        if n == 0.0 {
            *flag = true;
        } else if !*flag {
            row.iter_mut().for_each(|x| *x /= n);
        }
    }
    Ok(VectorSet::new(file.ids, file.dim, rows, flags, Space::Embedding)?)
}

/// Loads vectors as stored, for `expected` ids, in `space`.
pub fn load_vectors(path: &Path, expected: &[String], space: Space) -> Result<VectorSet> {
    if space == Space::Embedding {
        return import_vectors(path, expected);
    }
    let file = align(parse_vector_file(&read_text(path)?)?, expected)?;
    Ok(VectorSet::new(file.ids, file.dim, file.rows, file.zero_text, space)?)
}
