use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::mst::{single_linkage, Merge, MstEdge};

/// Edge weights below this are clamped before taking `λ = 1 / weight`.
pub const LAMBDA_WEIGHT_FLOOR: f64 = 1e-12;

fn lambda(weight: f64) -> f64 {
    1.0 / weight.max(LAMBDA_WEIGHT_FLOOR)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub birth_lambda: f64,
    /// Largest λ at which a point or child cluster leaves this node.
    pub death_lambda: f64,
    pub size: usize,
    pub stability: f64,
    pub children: Vec<usize>,
}

/// A point leaving cluster `cluster` at `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointAttachment {
    pub point: usize,
    pub cluster: usize,
    pub lambda: f64,
}

/// Condensed cluster hierarchy. Node 0 is the root; every child has a
/// larger id than its parent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CondensedTree {
    pub nodes: Vec<ClusterNode>,
    /// One attachment per clustered point.
    pub points: Vec<PointAttachment>,
    pub n_points: usize,
    pub min_cluster_size: usize,
}

impl CondensedTree {
    pub fn root(&self) -> &ClusterNode {
        &self.nodes[0]
    }

    /// Points attached directly to `node`.
    pub fn direct_points(&self, node: usize) -> impl Iterator<Item = &PointAttachment> {
        self.points.iter().filter(move |a| a.cluster == node)
    }

    /// True when `ancestor` lies strictly above `node`.
    pub fn is_ancestor(&self, ancestor: usize, node: usize) -> bool {
        let mut cur = self.nodes[node].parent;
        while let Some(p) = cur {
            if p == ancestor {
                return true;
            }
            cur = self.nodes[p].parent;
        }
        false
    }
}

/// Condenses the single-linkage hierarchy of `mst` (sorted by
/// [`MstEdge::cmp_key`]) over `n` points.
///
/// Walking down from the root, a split where both sides hold at least
/// `min_cluster_size` points creates two child clusters; otherwise the
/// undersized side's points fall out of the current cluster at
/// `λ = 1 / weight` and the larger side carries on as the same cluster.
/// `min_cluster_size` below 2 is treated as 2.
pub fn condense_tree(mst: &[MstEdge], n: usize, min_cluster_size: usize) -> CondensedTree {
    let mcs = min_cluster_size.max(2);
    let merges = single_linkage(mst, n);
    let mut nodes = vec![ClusterNode {
        id: 0,
        parent: None,
        birth_lambda: 0.0,
        death_lambda: 0.0,
        size: n,
        stability: 0.0,
        children: Vec::new(),
    }];
    let mut points = Vec::with_capacity(n);

    if n == 1 {
        points.push(PointAttachment {
            point: 0,
            cluster: 0,
            lambda: 0.0,
        });
    }
    let size_of = |node: usize| if node < n { 1 } else { merges[node - n].size };

    let mut stack: Vec<(usize, usize)> = Vec::new();
    if n >= 2 {
        stack.push((2 * n - 2, 0));
    }
    let mut leaves = Vec::new();
    while let Some((dnode, cluster)) = stack.pop() {
        if dnode < n {
            // A lone point reached while its cluster carries on.
            let lam = nodes[cluster].death_lambda.max(nodes[cluster].birth_lambda);
            points.push(PointAttachment {
                point: dnode,
                cluster,
                lambda: lam,
            });
            continue;
        }
        let Merge {
            left, right, weight, ..
        } = merges[dnode - n];
        let lam = lambda(weight);
        let (ls, rs) = (size_of(left), size_of(right));
        match (ls >= mcs, rs >= mcs) {
            (true, true) => {
                let mut kids = [0usize; 2];
                for (slot, (child, size)) in [(left, ls), (right, rs)].into_iter().enumerate() {
                    let id = nodes.len();
                    nodes.push(ClusterNode {
                        id,
                        parent: Some(cluster),
                        birth_lambda: lam,
                        death_lambda: lam,
                        size,
                        stability: 0.0,
                        children: Vec::new(),
                    });
                    nodes[cluster].children.push(id);
                    kids[slot] = id;
                    let _ = child;
                }
                bump_death(&mut nodes[cluster], lam);
                // Right pushed first so the left subtree is expanded first.
                stack.push((right, kids[1]));
                stack.push((left, kids[0]));
            }
            (true, false) => {
                fall_out(right, n, &merges, &mut leaves, cluster, lam, &mut points);
                bump_death(&mut nodes[cluster], lam);
                stack.push((left, cluster));
            }
            (false, true) => {
                fall_out(left, n, &merges, &mut leaves, cluster, lam, &mut points);
                bump_death(&mut nodes[cluster], lam);
                stack.push((right, cluster));
            }
            (false, false) => {
                fall_out(left, n, &merges, &mut leaves, cluster, lam, &mut points);
                fall_out(right, n, &merges, &mut leaves, cluster, lam, &mut points);
                bump_death(&mut nodes[cluster], lam);
            }
        }
    }

    points.sort_by_key(|a| a.point);
    let mut tree = CondensedTree {
        nodes,
        points,
        n_points: n,
        min_cluster_size: mcs,
    };
    compute_stabilities(&mut tree);
    tree
}

fn bump_death(node: &mut ClusterNode, lam: f64) {
    if lam > node.death_lambda {
        node.death_lambda = lam;
    }
}

fn fall_out(
    dnode: usize,
    n: usize,
    merges: &[Merge],
    scratch: &mut Vec<usize>,
    cluster: usize,
    lam: f64,
    points: &mut Vec<PointAttachment>,
) {
    scratch.clear();
    scratch.push(dnode);
    while let Some(x) = scratch.pop() {
        if x < n {
            points.push(PointAttachment {
                point: x,
                cluster,
                lambda: lam,
            });
        } else {
            let m = &merges[x - n];
            scratch.push(m.right);
            scratch.push(m.left);
        }
    }
}

/// `stability(C) = Σ_{p ∈ C} (λ_p − λ_birth(C))`, where a point inside a
/// child cluster leaves `C` at that child's birth λ.
fn compute_stabilities(tree: &mut CondensedTree) {
    let mut stability = vec![0.0; tree.nodes.len()];
    for a in &tree.points {
        stability[a.cluster] += a.lambda - tree.nodes[a.cluster].birth_lambda;
    }
    for node in &tree.nodes {
        if let Some(p) = node.parent {
            stability[p] += node.size as f64 * (node.birth_lambda - tree.nodes[p].birth_lambda);
        }
    }
    for (node, s) in tree.nodes.iter_mut().zip(stability) {
        node.stability = s.max(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_mst, core_distances, Metric, MutualReachability, PointView};
    use super::*;

    fn tree_for(xs: &[f64], dim: usize, mcs: usize) -> CondensedTree {
        let p = PointView::new(xs, dim);
        let cores = core_distances(p, Metric::Euclidean, 1).unwrap();
        let mst = build_mst(&MutualReachability::new(p, &cores, Metric::Euclidean));
        condense_tree(&mst, p.len(), mcs)
    }

    #[test]
    fn two_tight_triples() {
        let xs = [0.0, 0.1, 0.2, 10.0, 10.1, 10.2];
        let t = tree_for(&xs, 1, 2);
        let root = t.root();
        assert_eq!(root.children.len(), 2);
        for &c in &root.children {
            assert_eq!(t.nodes[c].size, 3);
            assert!(t.nodes[c].children.is_empty());
            assert_eq!(t.nodes[c].birth_lambda, 1.0 / (10.0 - 0.2));
        }
        assert_eq!(t.nodes.len(), 3);
        // Hand dendrogram: inside a triple the two 0.1-edges merge; the
        // split at 0.1 leaves sides {1 point, 2 points} with mcs 2, so the
        // single point falls out at λ=10 and the pair at λ=10 too.
        for a in &t.points {
            assert_ne!(a.cluster, 0);
        }
    }

    #[test]
    fn oversized_floor_gives_a_single_root() {
        let xs = [0.0, 1.0, 2.5, 7.0];
        let t = tree_for(&xs, 1, 10);
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.points.len(), 4);
        assert!(t.points.iter().all(|a| a.cluster == 0));
    }

    #[test]
    fn sizes_are_conserved() {
        let xs = [0.0, 0.2, 0.3, 0.35, 5.0, 5.1, 5.3, 5.6, 12.0, 12.2, 12.25, 20.0];
        let t = tree_for(&xs, 1, 2);
        for node in &t.nodes {
            let direct = t.direct_points(node.id).count();
            let kids: usize = node.children.iter().map(|&c| t.nodes[c].size).sum();
            assert_eq!(node.size, direct + kids, "node {}", node.id);
            assert!(node.stability >= 0.0);
            if let Some(p) = node.parent {
                assert!(p < node.id);
                assert!(node.size < t.nodes[p].size);
                assert!(node.size >= 2);
            }
        }
        let mut seen: Vec<usize> = t.points.iter().map(|a| a.point).collect();
        seen.dedup();
        assert_eq!(seen.len(), xs.len());
    }

    #[test]
    fn stability_by_hand() {
        // 4 points: pairs {0,1} and {2,3} 1 apart, pairs 10 apart; mcs 2.
        let xs = [0.0, 1.0, 11.0, 12.0];
        let t = tree_for(&xs, 1, 2);
        assert_eq!(t.nodes.len(), 3);
        // Root born at 0; children born at λ=1/10; their points fall out at λ=1.
        assert!((t.nodes[0].stability - 4.0 * 0.1).abs() < 1e-12);
        for c in [1, 2] {
            assert!((t.nodes[c].stability - 2.0 * (1.0 - 0.1)).abs() < 1e-12);
            assert_eq!(t.nodes[c].death_lambda, 1.0);
        }
    }
}
