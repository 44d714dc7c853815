use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{symmetric_eigen, Space, VectorSet};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method", content = "path")]
pub enum ReductionMethod {
    Pca,
    /// Reduced vectors computed elsewhere; loaded by the IO layer.
    Import(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionConfig {
    pub method: ReductionMethod,
    pub n_components: usize,
    /// Recorded for reproducibility; exact PCA does not consume randomness.
    pub seed: u64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            method: ReductionMethod::Pca,
            n_components: 40,
            seed: 42,
        }
    }
}

/// Fitted principal axes.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// Row-major `n_components × dim`, one unit axis per row.
    pub components: Vec<f64>,
    pub n_components: usize,
    pub dim: usize,
    /// All covariance eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
}

impl PcaModel {
    pub fn component(&self, j: usize) -> &[f64] {
        &self.components[j * self.dim..(j + 1) * self.dim]
    }

    /// Variance captured by the retained axes.
    pub fn captured_variance(&self) -> f64 {
        self.eigenvalues[..self.n_components].iter().sum()
    }

    pub fn project(&self, row: &[f64], out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate().take(self.n_components) {
            let axis = self.component(j);
            *o = row
                .iter()
                .zip(&self.mean)
                .zip(axis)
                .map(|((x, m), a)| (x - m) * a)
                .sum();
        }
    }
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub vectors: VectorSet,
    pub model: PcaModel,
}

/// Exact PCA through the eigendecomposition of the sample covariance.
///
/// Zero-text rows are left out of the fit and projected like the others;
/// they keep their flag. Axes are ordered by descending eigenvalue and each
/// is signed so that its largest-magnitude loading is positive.
pub fn reduce_dims(vs: &VectorSet, cfg: &ReductionConfig) -> Result<Reduction> {
    if cfg.method != ReductionMethod::Pca {
        return Err(Error::validation(
            "reduce",
            "imported reductions are loaded from their exchange file",
        ));
    }
    if vs.space() != Space::Embedding {
        return Err(Error::validation("reduce", "input must be in the embedding space"));
    }
    let dim = vs.dim();
    let k = cfg.n_components;
    if k == 0 || k > dim {
        return Err(Error::validation("n_components", format!("{k} is outside 1..={dim}")));
    }
    let fit_rows = vs.usable_rows();
    if fit_rows.len() < 2 {
        return Err(Error::validation("vectors", "PCA needs at least 2 non-empty rows"));
    }

    let n = fit_rows.len() as f64;
    let mut mean = vec![0.0; dim];
    for &i in &fit_rows {
        for (m, x) in mean.iter_mut().zip(vs.row(i)) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n;
    }

    let cov = covariance(vs, &fit_rows, &mean);
    let eig = symmetric_eigen(&cov, dim);

    let mut components = vec![0.0; k * dim];
    for j in 0..k {
        let axis: Vec<f64> = eig.vector(j).collect();
        let mut pivot = 0;
        for (idx, a) in axis.iter().enumerate() {
            if libm::fabs(*a) > libm::fabs(axis[pivot]) {
                pivot = idx;
            }
        }
        let sign = if axis[pivot] < 0.0 { -1.0 } else { 1.0 };
        for (dst, a) in components[j * dim..(j + 1) * dim].iter_mut().zip(&axis) {
            *dst = sign * a;
        }
    }
    let model = PcaModel {
        mean,
        components,
        n_components: k,
        dim,
        eigenvalues: eig.values,
    };

    let mut data = vec![0.0; vs.len() * k];
    for (i, out) in data.chunks_exact_mut(k).enumerate() {
        model.project(vs.row(i), out);
    }
    let vectors = VectorSet::from_parts(
        vs.ids().to_vec(),
        k,
        data,
        vs.zero_text_flags().to_vec(),
        Space::Reduced,
    );
    Ok(Reduction { vectors, model })
}

/// Sample covariance (divisor n − 1) over `rows`, row-major `dim × dim`.
fn covariance(vs: &VectorSet, rows: &[usize], mean: &[f64]) -> Vec<f64> {
    let dim = vs.dim();
    let accumulate = |chunk: &[usize]| -> Vec<f64> {
        let mut acc = vec![0.0; dim * dim];
        let mut centered = vec![0.0; dim];
        for &i in chunk {
            for ((c, x), m) in centered.iter_mut().zip(vs.row(i)).zip(mean) {
                *c = x - m;
            }
            for a in 0..dim {
                let ca = centered[a];
                if ca == 0.0 {
                    continue;
                }
                let row = &mut acc[a * dim..a * dim + a + 1];
                for (dst, cb) in row.iter_mut().zip(&centered[..=a]) {
                    *dst += ca * cb;
                }
            }
        }
        acc
    };

    #[cfg(feature = "parallel")]
    let mut cov = {
        use rayon::prelude::*;
        let chunk = rows.len().div_ceil(rayon::current_num_threads().max(1)).max(256);
        let parts: Vec<Vec<f64>> = rows.par_chunks(chunk).map(accumulate).collect();
        let mut total = vec![0.0; dim * dim];
        for part in parts {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        }
        total
    };
    #[cfg(not(feature = "parallel"))]
    let mut cov = accumulate(rows);

    let denom = (rows.len() - 1) as f64;
    for a in 0..dim {
        for b in 0..=a {
            let v = cov[a * dim + b] / denom;
            cov[a * dim + b] = v;
            cov[b * dim + a] = v;
        }
    }
    cov
}
