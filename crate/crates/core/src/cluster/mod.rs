//! HDBSCAN from first principles: core distances, mutual reachability,
//! an exact Prim minimum spanning tree, single-linkage condensation with
//! stabilities, and excess-of-mass selection.

mod condense;
mod core_distance;
mod mst;
mod select;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::vectorize::VectorSet;
use crate::{Error, Result};

pub use condense::{condense_tree, ClusterNode, CondensedTree, PointAttachment, LAMBDA_WEIGHT_FLOOR};
pub use core_distance::{core_distances, mutual_reachability, MutualReachability};
pub use mst::{build_mst, single_linkage, Merge, MstEdge};
pub use select::select_clusters_eom;

/// Label of points outside every selected cluster.
pub const NOISE: i64 = -1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    #[default]
    Euclidean,
    /// `1 − cos(a, b)`.
    CosineDistance,
}

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => {
                let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                libm::sqrt(s)
            }
            Metric::CosineDistance => {
                let c = crate::vectorize::cosine_similarity(a, b);
                if c.degenerate {
                    1.0
                } else {
                    (1.0 - c.value).max(0.0)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    #[default]
    Eom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterParams {
    pub min_cluster_size: usize,
    pub min_samples: usize,
    pub selection: Selection,
    pub metric: Metric,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams {
            min_cluster_size: 50,
            min_samples: 1,
            selection: Selection::Eom,
            metric: Metric::Euclidean,
        }
    }
}

impl ClusterParams {
    pub fn new(min_cluster_size: usize, min_samples: usize) -> Self {
        ClusterParams {
            min_cluster_size,
            min_samples,
            ..ClusterParams::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_cluster_size < 2 {
            return Err(Error::validation("min_cluster_size", "must be at least 2"));
        }
        if self.min_samples < 1 {
            return Err(Error::validation("min_samples", "must be at least 1"));
        }
        Ok(())
    }
}

/// Borrowed row-major point matrix.
#[derive(Debug, Clone, Copy)]
pub struct PointView<'a> {
    data: &'a [f64],
    dim: usize,
}

impl<'a> PointView<'a> {
    pub fn new(data: &'a [f64], dim: usize) -> Self {
        assert!(dim > 0 && data.len() % dim == 0, "ragged point matrix");
        PointView { data, dim }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &'a [f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

/// Final flat labelling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub ids: Vec<String>,
    /// Cluster id per point, or [`NOISE`].
    pub labels: Vec<i64>,
    /// Condensed-tree node of each cluster id: `selected[label]`.
    pub selected: Vec<usize>,
    pub params: ClusterParams,
}

impl Clustering {
    pub fn n_clusters(&self) -> usize {
        self.selected.len()
    }

    /// Member count per cluster id.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.selected.len()];
        for &l in &self.labels {
            if l >= 0 {
                sizes[l as usize] += 1;
            }
        }
        sizes
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == NOISE).count()
    }

    /// Cluster id of each condensed-tree node that was selected.
    pub fn label_of_node(&self) -> BTreeMap<usize, i64> {
        self.selected
            .iter()
            .enumerate()
            .map(|(label, &node)| (node, label as i64))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct HdbscanOutput {
    pub clustering: Clustering,
    pub tree: CondensedTree,
}

/// Clusters the text-bearing rows of `points`; zero-text rows are labeled
/// noise and left out of the tree. Condensed-tree point indices refer to
/// rows of `points`.
pub fn run_hdbscan(points: &VectorSet, params: &ClusterParams) -> Result<HdbscanOutput> {
    let usable = points.usable_rows();
    let dim = points.dim();
    let mut data = Vec::with_capacity(usable.len() * dim);
    for &i in &usable {
        data.extend_from_slice(points.row(i));
    }
    let (labels_compact, mut tree, selected) = cluster_points(PointView::new(&data, dim.max(1)), params)?;

    let mut labels = vec![NOISE; points.len()];
    for (compact, &row) in usable.iter().enumerate() {
        labels[row] = labels_compact[compact];
    }
    for att in &mut tree.points {
        att.point = usable[att.point];
    }
    tree.n_points = points.len();
    Ok(HdbscanOutput {
        clustering: Clustering {
            ids: points.ids().to_vec(),
            labels,
            selected,
            params: *params,
        },
        tree,
    })
}

/// HDBSCAN over a dense point matrix. Returns per-point labels, the
/// condensed tree, and the selected node of each label.
///
/// Cluster ids are assigned by decreasing member count; equal counts are
/// ordered by their smallest member index.
pub fn cluster_points(points: PointView<'_>, params: &ClusterParams) -> Result<(Vec<i64>, CondensedTree, Vec<usize>)> {
    params.validate()?;
    let n = points.len();
    if n < 2 || n < params.min_samples + 1 {
        return Err(Error::validation(
            "points",
            alloc::format!(
                "{n} points; need at least {} for min_samples={}",
                (params.min_samples + 1).max(2),
                params.min_samples
            ),
        ));
    }
    let cores = core_distances(points, params.metric, params.min_samples)?;
    let mreach = MutualReachability::new(points, &cores, params.metric);
    let mst = build_mst(&mreach);
    let tree = condense_tree(&mst, n, params.min_cluster_size);
    let selected = select_clusters_eom(&tree);
    let (labels, order) = label_points(&tree, &selected);
    let selected = order.into_iter().map(|i| selected[i]).collect();
    Ok((labels, tree, selected))
}

/// Labels each point with its selected ancestor cluster, renumbered by
/// decreasing size. Returns the labels and, for each new label, the index
/// into `selected` it came from.
fn label_points(tree: &CondensedTree, selected: &[usize]) -> (Vec<i64>, Vec<usize>) {
    // owner[node] = index into `selected` of the selected node at or above it.
    let mut owner: Vec<Option<usize>> = vec![None; tree.nodes.len()];
    for (s, &node) in selected.iter().enumerate() {
        owner[node] = Some(s);
    }
    for node in &tree.nodes {
        if owner[node.id].is_none() {
            if let Some(parent) = node.parent {
                owner[node.id] = owner[parent];
            }
        }
    }

    let mut raw = vec![None; tree.n_points];
    let mut sizes = vec![0usize; selected.len()];
    let mut first = vec![usize::MAX; selected.len()];
    for att in &tree.points {
        if let Some(s) = owner[att.cluster] {
            raw[att.point] = Some(s);
            sizes[s] += 1;
            first[s] = first[s].min(att.point);
        }
    }
    let mut order: Vec<usize> = (0..selected.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(first[a].cmp(&first[b])));
    let mut relabel = vec![0i64; selected.len()];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new as i64;
    }
    let labels = raw.into_iter().map(|s| s.map_or(NOISE, |s| relabel[s])).collect();
    (labels, order)
}
