use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::MutualReachability;

/// Undirected weighted edge with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MstEdge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

impl MstEdge {
    pub fn new(u: usize, v: usize, weight: f64) -> Self {
        MstEdge {
            a: u.min(v),
            b: u.max(v),
            weight,
        }
    }

    /// Total edge order: weight, then `(a, b)` lexicographically.
    pub fn cmp_key(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.a.cmp(&other.a))
            .then(self.b.cmp(&other.b))
    }
}

/// Exact minimum spanning tree of the complete mutual-reachability graph
/// (Prim, O(n²) distance evaluations). Edges compare by
/// [`MstEdge::cmp_key`], so the tree is unique even with tied weights.
/// The result is sorted by that order.
pub fn build_mst(mreach: &MutualReachability<'_>) -> Vec<MstEdge> {
    let n = mreach.len();
    if n < 2 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best: Vec<MstEdge> = (0..n).map(|v| MstEdge::new(0, v, f64::INFINITY)).collect();
    let mut edges = Vec::with_capacity(n - 1);
    let mut current = 0usize;
    in_tree[0] = true;

    for _ in 1..n {
        let next = relax(mreach, &in_tree, &mut best, current);
        in_tree[next] = true;
        edges.push(best[next]);
        current = next;
    }
    edges.sort_by(MstEdge::cmp_key);
    edges
}

/// Updates candidate edges with distances from `current` and returns the
/// out-of-tree vertex whose candidate edge is smallest.
#[cfg(not(feature = "parallel"))]
fn relax(mreach: &MutualReachability<'_>, in_tree: &[bool], best: &mut [MstEdge], current: usize) -> usize {
    let mut winner: Option<usize> = None;
    for v in 0..best.len() {
        if in_tree[v] {
            continue;
        }
        let cand = MstEdge::new(current, v, mreach.distance(current, v));
        if cand.cmp_key(&best[v]) == Ordering::Less {
            best[v] = cand;
        }
        winner = match winner {
            Some(w) if best[w].cmp_key(&best[v]) != Ordering::Greater => Some(w),
            _ => Some(v),
        };
    }
    winner.expect("an out-of-tree vertex remains")
}

#[cfg(feature = "parallel")]
fn relax(mreach: &MutualReachability<'_>, in_tree: &[bool], best: &mut [MstEdge], current: usize) -> usize {
    use rayon::prelude::*;
    const CHUNK: usize = 1024;
    best.par_chunks_mut(CHUNK)
        .enumerate()
        .filter_map(|(c, chunk)| {
            let mut winner: Option<(usize, MstEdge)> = None;
            for (off, slot) in chunk.iter_mut().enumerate() {
                let v = c * CHUNK + off;
                if in_tree[v] {
                    continue;
                }
                let cand = MstEdge::new(current, v, mreach.distance(current, v));
                if cand.cmp_key(slot) == Ordering::Less {
                    *slot = cand;
                }
                winner = match winner {
                    Some((w, e)) if e.cmp_key(slot) != Ordering::Greater => Some((w, e)),
                    _ => Some((v, *slot)),
                };
            }
            winner
        })
        .reduce_with(|x, y| if x.1.cmp_key(&y.1) != Ordering::Greater { x } else { y })
        .map(|(w, _)| w)
        .expect("an out-of-tree vertex remains")
}

/// One agglomeration step of the single-linkage dendrogram. Points are
/// nodes `0..n`; merge `k` creates node `n + k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub weight: f64,
    pub size: usize,
}

/// Single-linkage dendrogram from MST edges sorted by [`MstEdge::cmp_key`].
pub fn single_linkage(edges: &[MstEdge], n: usize) -> Vec<Merge> {
    let mut parent: Vec<usize> = (0..2 * n).collect();
    let mut size = vec![1usize; 2 * n];
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in edges {
        let ra = find(&mut parent, e.a);
        let rb = find(&mut parent, e.b);
        debug_assert_ne!(ra, rb, "MST edges never close a cycle");
        let node = n + merges.len();
        let s = size[ra] + size[rb];
        merges.push(Merge {
            left: ra,
            right: rb,
            weight: e.weight,
            size: s,
        });
        parent[ra] = node;
        parent[rb] = node;
        size[node] = s;
    }
    merges
}
