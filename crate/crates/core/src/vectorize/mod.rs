//! Document vectors: the hashing embedder, id-aligned vector sets, cosine
//! similarity and PCA reduction.

mod eigen;
mod pca;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::text::{fnv1a64, terms, NgramRange};
use crate::{Error, Result};

pub use eigen::{symmetric_eigen, SymmetricEigen};
pub use pca::{reduce_dims, PcaModel, Reduction, ReductionConfig, ReductionMethod};

/// Default width of hashed embeddings.
pub const DEFAULT_EMBED_DIM: usize = 512;

/// Which space a [`VectorSet`] lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Embedding,
    Reduced,
}

/// Dense vectors aligned with record ids, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSet {
    ids: Vec<String>,
    dim: usize,
    data: Vec<f64>,
    zero_text: Vec<bool>,
    space: Space,
}

impl VectorSet {
    /// Builds a set from rows. Rows of the embedding space must be unit
    /// length unless flagged zero-text.
    pub fn new(ids: Vec<String>, dim: usize, rows: Vec<Vec<f64>>, zero_text: Vec<bool>, space: Space) -> Result<Self> {
        if rows.len() != ids.len() || zero_text.len() != ids.len() {
            return Err(Error::validation(
                "vectors",
                format!("{} ids, {} rows, {} flags", ids.len(), rows.len(), zero_text.len()),
            ));
        }
        let mut data = Vec::with_capacity(ids.len() * dim);
        for (id, row) in ids.iter().zip(&rows) {
            if row.len() != dim {
                return Err(Error::validation(
                    id.clone(),
                    format!("row has {} values, expected {dim}", row.len()),
                ));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::validation(id.clone(), "non-finite value"));
            }
            data.extend_from_slice(row);
        }
        let set = VectorSet {
            ids,
            dim,
            data,
            zero_text,
            space,
        };
        if space == Space::Embedding {
            for i in 0..set.len() {
                if set.zero_text[i] {
                    continue;
                }
                let norm = l2_norm(set.row(i));
                if libm::fabs(norm - 1.0) > 1e-6 {
                    return Err(Error::validation(
                        set.ids[i].clone(),
                        format!("embedding norm {norm} is not 1"),
                    ));
                }
            }
        }
        Ok(set)
    }

    pub(crate) fn from_parts(ids: Vec<String>, dim: usize, data: Vec<f64>, zero_text: Vec<bool>, space: Space) -> Self {
        debug_assert_eq!(data.len(), ids.len() * dim);
        VectorSet {
            ids,
            dim,
            data,
            zero_text,
            space,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim.max(1)).take(self.ids.len())
    }

    pub fn is_zero_text(&self, i: usize) -> bool {
        self.zero_text[i]
    }

    pub fn zero_text_flags(&self) -> &[bool] {
        &self.zero_text
    }

    /// Row-major values.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Indices of the rows that carry text.
    pub fn usable_rows(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.zero_text[i]).collect()
    }
}

/// One embedded document.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub values: Vec<f64>,
    /// Set when the input produced no tokens; `values` is then all zeros.
    pub zero_text: bool,
}

/// Hashing embedder over unigrams and bigrams of `title + ". " + abstract`.
pub fn embed_text(title: &str, abstract_text: &str, dim: usize) -> Result<Embedding> {
    let mut joined = String::with_capacity(title.len() + abstract_text.len() + 2);
    joined.push_str(title);
    joined.push_str(". ");
    joined.push_str(abstract_text);
    embed_document(&joined, dim)
}

/// Hashing embedder over unigrams and bigrams of one text: each term adds 1
/// to bucket `fnv1a64(term) mod dim`, then the vector is L2-normalized.
pub fn embed_document(text: &str, dim: usize) -> Result<Embedding> {
    if dim < 2 {
        return Err(Error::validation("dims", "embedding width must be at least 2"));
    }
    let mut values = vec![0.0; dim];
    for term in terms(text, NgramRange::UNI_BI) {
        values[hash_bucket(&term, dim)] += 1.0;
    }
    let norm = l2_norm(&values);
    if norm == 0.0 {
        return Ok(Embedding {
            values,
            zero_text: true,
        });
    }
    for v in &mut values {
        *v /= norm;
    }
    Ok(Embedding {
        values,
        zero_text: false,
    })
}

/// Bucket of `term` in a `dim`-wide hashed vector.
pub fn hash_bucket(term: &str, dim: usize) -> usize {
    (fnv1a64(term.as_bytes()) % dim as u64) as usize
}

/// Embeds `(id, title, abstract)` triples into an embedding-space set.
pub fn embed_corpus<'a, I>(docs: I, dim: usize) -> Result<VectorSet>
where
    I: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
{
    if dim < 2 {
        return Err(Error::validation("dims", "embedding width must be at least 2"));
    }
    let docs: Vec<_> = docs.into_iter().collect();
    let embed = |&(_, title, abs): &(&str, &str, &str)| embed_text(title, abs, dim);
    #[cfg(feature = "parallel")]
    let embedded: Vec<Embedding> = {
        use rayon::prelude::*;
        docs.par_iter().map(embed).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let embedded: Vec<Embedding> = docs.iter().map(embed).collect::<Result<_>>()?;

    let mut data = Vec::with_capacity(docs.len() * dim);
    let mut flags = Vec::with_capacity(docs.len());
    for e in embedded {
        data.extend_from_slice(&e.values);
        flags.push(e.zero_text);
    }
    let ids = docs.iter().map(|(id, _, _)| String::from(*id)).collect();
    Ok(VectorSet::from_parts(ids, dim, data, flags, Space::Embedding))
}

pub fn l2_norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// Cosine similarity with a flag for zero-length inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cosine {
    pub value: f64,
    /// Either input had zero length; `value` is then 0.
    pub degenerate: bool,
}

pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Cosine {
    debug_assert_eq!(u.len(), v.len());
    let mut dot = 0.0;
    let mut nu = 0.0;
    let mut nv = 0.0;
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Cosine {
            value: 0.0,
            degenerate: true,
        };
    }
    let value = dot / (libm::sqrt(nu) * libm::sqrt(nv));
    Cosine {
        value: value.clamp(-1.0, 1.0),
        degenerate: false,
    }
}
