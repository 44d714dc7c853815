use alloc::vec;
use alloc::vec::Vec;

use super::CondensedTree;

/// Excess-of-mass selection.
///
/// Bottom-up, a non-leaf node replaces its selected descendants only when
/// its own stability is strictly larger than their sum; leaves start out
/// selected. The root is never selected. Returns node ids in ascending
/// order; the result is an antichain.
pub fn select_clusters_eom(tree: &CondensedTree) -> Vec<usize> {
    let count = tree.nodes.len();
    let mut best = vec![0.0f64; count];
    let mut chosen = vec![false; count];
    for node in tree.nodes.iter().rev() {
        if node.parent.is_none() {
            continue;
        }
        let below: f64 = node.children.iter().map(|&c| best[c]).sum();
        if node.children.is_empty() || node.stability > below {
            chosen[node.id] = true;
            best[node.id] = node.stability;
        } else {
            best[node.id] = below;
        }
    }

    let mut selected = Vec::new();
    let mut stack: Vec<usize> = tree.root().children.iter().rev().copied().collect();
    while let Some(id) = stack.pop() {
        if chosen[id] {
            selected.push(id);
        } else {
            stack.extend(tree.nodes[id].children.iter().rev().copied());
        }
    }
    selected.sort_unstable();
    selected
}
