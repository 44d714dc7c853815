use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{fallback_name, TopicSignature};
use crate::cluster::{Clustering, CondensedTree};
use crate::corpus::{PaperRecord, NOISE_TOPIC};
use crate::{Error, Result};

pub const OUTLIERS_NAME: &str = "Outliers";
pub const ROOT_NAME: &str = "All Topics";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Root,
    Internal,
    Leaf,
    Outliers,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub kind: NodeKind,
    /// Cluster id for leaves, [`NOISE_TOPIC`] for the outlier bucket.
    pub topic_id: Option<i64>,
    pub name: String,
    pub paper_count: usize,
    /// Papers attached to this node rather than to a child.
    pub direct_count: usize,
    pub depth: usize,
    /// Condensed-tree node this topic node stands for.
    pub cluster_node: Option<usize>,
}

/// Topic hierarchy. Node 0 is the root; the outlier bucket hangs off the
/// root but its papers do not count towards the root total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicTree {
    pub nodes: Vec<TopicNode>,
}

impl TopicTree {
    pub fn root(&self) -> &TopicNode {
        &self.nodes[0]
    }

    pub fn children(&self, id: usize) -> impl Iterator<Item = &TopicNode> {
        self.nodes.iter().filter(move |n| n.parent == Some(id))
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TopicNode> {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Leaf)
    }

    pub fn outliers(&self) -> &TopicNode {
        self.nodes
            .iter()
            .find(|n| n.kind == NodeKind::Outliers)
            .expect("outlier bucket")
    }

    /// Name of each cluster id.
    pub fn topic_names(&self) -> BTreeMap<i64, String> {
        self.leaves()
            .filter_map(|n| n.topic_id.map(|t| (t, n.name.clone())))
            .collect()
    }

    /// Checks `paper_count = direct_count + Σ children` at every node,
    /// leaving the outlier bucket out of the root sum.
    pub fn check_counts(&self) -> Result<()> {
        for n in &self.nodes {
            let sum: usize = self
                .children(n.id)
                .filter(|c| c.kind != NodeKind::Outliers)
                .map(|c| c.paper_count)
                .sum();
            if n.paper_count != n.direct_count + sum {
                return Err(Error::Consistency(format!(
                    "node {} counts {} papers but its parts add to {}",
                    n.id,
                    n.paper_count,
                    n.direct_count + sum
                )));
            }
        }
        Ok(())
    }
}

/// Turns the selected clusters of `clustering` into leaves and their
/// condensed-tree ancestors into internal nodes, collapsing single-child
/// chains. `sigs[label]` names leaf `label`; internal nodes are named from
/// the summed weights of the leaves below them.
pub fn build_topic_tree(tree: &CondensedTree, clustering: &Clustering, sigs: &[TopicSignature]) -> Result<TopicTree> {
    let selected = &clustering.selected;
    for (i, &a) in selected.iter().enumerate() {
        if a >= tree.nodes.len() {
            return Err(Error::Consistency(format!("selected node {a} is not in the tree")));
        }
        if a == 0 {
            return Err(Error::Consistency("the root cannot be a selected cluster".into()));
        }
        for &b in &selected[i + 1..] {
            if a == b || tree.is_ancestor(a, b) || tree.is_ancestor(b, a) {
                return Err(Error::Consistency(format!("selected clusters {a} and {b} are nested")));
            }
        }
    }
    let sizes = clustering.sizes();

    // Keep selected nodes and everything above them.
    let mut leaf_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut kept = vec![false; tree.nodes.len()];
    kept[0] = true;
    for (label, &node) in selected.iter().enumerate() {
        leaf_of.insert(node, label);
        let mut cur = Some(node);
        while let Some(c) = cur {
            if kept[c] && c != node {
                break;
            }
            kept[c] = true;
            cur = tree.nodes[c].parent;
        }
    }
    // Kept children of each kept node, with single-child chains skipped.
    let kept_children =
        |id: usize| -> Vec<usize> { tree.nodes[id].children.iter().copied().filter(|&c| kept[c]).collect() };
    let collapse = |mut id: usize| -> usize {
        while !leaf_of.contains_key(&id) {
            let ch = kept_children(id);
            if ch.len() != 1 {
                break;
            }
            id = ch[0];
        }
        id
    };

    let mut out = TopicTree { nodes: Vec::new() };
    out.nodes.push(TopicNode {
        id: 0,
        parent: None,
        kind: NodeKind::Root,
        topic_id: None,
        name: ROOT_NAME.to_string(),
        paper_count: 0,
        direct_count: 0,
        depth: 0,
        cluster_node: Some(0),
    });
    // Depth-first, children ordered by the smallest cluster id below them.
    let min_label = |id: usize| -> usize {
        selected
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == id || tree.is_ancestor(id, s))
            .map(|(l, _)| l)
            .min()
            .unwrap_or(usize::MAX)
    };
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let push_children = |stack: &mut Vec<(usize, usize)>, cnode: usize, parent: usize| {
        let mut ch: Vec<usize> = kept_children(cnode).into_iter().map(collapse).collect();
        ch.sort_by_key(|&c| core::cmp::Reverse(min_label(c)));
        stack.extend(ch.into_iter().map(|c| (c, parent)));
    };
    push_children(&mut stack, 0, 0);
    while let Some((cnode, parent)) = stack.pop() {
        let id = out.nodes.len();
        let depth = out.nodes[parent].depth + 1;
        match leaf_of.get(&cnode) {
            Some(&label) => {
                let name = sigs
                    .get(label)
                    .map(|s| s.name.clone())
                    .filter(|n| !n.is_empty())
                    .unwrap_or_else(|| format!("Topic {label}"));
                out.nodes.push(TopicNode {
                    id,
                    parent: Some(parent),
                    kind: NodeKind::Leaf,
                    topic_id: Some(label as i64),
                    name,
                    paper_count: sizes[label],
                    direct_count: sizes[label],
                    depth,
                    cluster_node: Some(cnode),
                });
            }
            None => {
                out.nodes.push(TopicNode {
                    id,
                    parent: Some(parent),
                    kind: NodeKind::Internal,
                    topic_id: None,
                    name: String::new(),
                    paper_count: 0,
                    direct_count: 0,
                    depth,
                    cluster_node: Some(cnode),
                });
                push_children(&mut stack, cnode, id);
            }
        }
    }

    // Roll counts and merged weights up; children always follow parents.
    let mut merged: Vec<BTreeMap<String, f64>> = vec![BTreeMap::new(); out.nodes.len()];
    for i in (1..out.nodes.len()).rev() {
        let n = &out.nodes[i];
        if let (NodeKind::Leaf, Some(t)) = (n.kind, n.topic_id) {
            if let Some(s) = sigs.get(t as usize) {
                merged[i] = s.weights.clone();
            }
        }
        let parent = n.parent.unwrap();
        let count = n.paper_count;
        out.nodes[parent].paper_count += count;
        let child = core::mem::take(&mut merged[i]);
        if out.nodes[i].kind == NodeKind::Internal {
            out.nodes[i].name = merged_name(&child);
        }
        for (t, w) in child {
            *merged[parent].entry(t).or_insert(0.0) += w;
        }
    }

    let id = out.nodes.len();
    let noise = clustering.noise_count();
    out.nodes.push(TopicNode {
        id,
        parent: Some(0),
        kind: NodeKind::Outliers,
        topic_id: Some(NOISE_TOPIC),
        name: OUTLIERS_NAME.to_string(),
        paper_count: noise,
        direct_count: noise,
        depth: 1,
        cluster_node: None,
    });
    Ok(out)
}

fn merged_name(weights: &BTreeMap<String, f64>) -> String {
    let mut terms: Vec<(&String, f64)> = weights.iter().map(|(t, &w)| (t, w)).filter(|(_, w)| *w > 0.0).collect();
    terms.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let top: Vec<String> = terms.into_iter().take(3).map(|(t, _)| t.clone()).collect();
    if top.is_empty() {
        "Topic Group".to_string()
    } else {
        fallback_name(&top)
    }
}

/// Writes `topic_id` and `topic_name` onto every record. `records[i]` must
/// be the record clustered as point `i`.
pub fn assign_topics(records: &mut [PaperRecord], clustering: &Clustering, tree: &TopicTree) -> Result<()> {
    if records.len() != clustering.ids.len() {
        return Err(Error::validation(
            "record_id",
            format!("{} records for {} clustered ids", records.len(), clustering.ids.len()),
        ));
    }
    if let Some((r, id)) = records.iter().zip(&clustering.ids).find(|(r, id)| r.record_id != **id) {
        return Err(Error::validation(
            "record_id",
            format!("record {} is aligned with clustered id {id}", r.record_id),
        ));
    }
    let names = tree.topic_names();
    for (r, &label) in records.iter_mut().zip(&clustering.labels) {
        if label < 0 {
            r.topic_id = NOISE_TOPIC;
            r.topic_name = OUTLIERS_NAME.to_string();
        } else {
            r.topic_id = label;
            r.topic_name = names.get(&label).cloned().unwrap_or_else(|| format!("Topic {label}"));
        }
    }
    Ok(())
}
