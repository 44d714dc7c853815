//! Slow, direct HDBSCAN used as a test oracle. Shares no code with the
//! library: every neighbour list is a full sort, the spanning tree comes
//! from Kruskal over all pairs, and the hierarchy is built top-down by
//! deleting tree edges heaviest first.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Distance to the `min_samples`-th nearest other point.
pub fn core_distances(points: &[Vec<f64>], min_samples: usize) -> Vec<f64> {
    (0..points.len())
        .map(|i| {
            let mut d: Vec<f64> = (0..points.len())
                .filter(|&j| j != i)
                .map(|j| euclid(&points[i], &points[j]))
                .collect();
            d.sort_by(f64::total_cmp);
            d[min_samples - 1]
        })
        .collect()
}

pub fn mreach_matrix(points: &[Vec<f64>], min_samples: usize) -> Vec<Vec<f64>> {
    let core = core_distances(points, min_samples);
    let n = points.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m[i][j] = euclid(&points[i], &points[j]).max(core[i]).max(core[j]);
            }
        }
    }
    m
}

/// Edges as `(weight, lo, hi)`, in ascending order.
pub fn kruskal(m: &[Vec<f64>]) -> Vec<(f64, usize, usize)> {
    let n = m.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((m[i][j], i, j));
        }
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut comp: Vec<usize> = (0..n).collect();
    let mut tree = Vec::new();
    for (w, a, b) in edges {
        let (ca, cb) = (comp[a], comp[b]);
        if ca != cb {
            for c in comp.iter_mut() {
                if *c == cb {
                    *c = ca;
                }
            }
            tree.push((w, a, b));
        }
    }
    tree
}

struct Cluster {
    parent: Option<usize>,
    birth: f64,
    size: usize,
    children: Vec<usize>,
    /// `(point, λ)` for points leaving this cluster directly.
    leaving: Vec<(usize, f64)>,
}

fn component(start: usize, live: &BTreeSet<(usize, usize)>, n: usize) -> BTreeSet<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in live {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = BTreeSet::from([start]);
    let mut todo = vec![start];
    while let Some(x) = todo.pop() {
        for &y in &adj[x] {
            if seen.insert(y) {
                todo.push(y);
            }
        }
    }
    seen
}

/// Flat labels: clusters numbered by size descending, ties by smallest
/// member; -1 for noise.
pub fn hdbscan(points: &[Vec<f64>], min_cluster_size: usize, min_samples: usize) -> Vec<i64> {
    let n = points.len();
    let mcs = min_cluster_size.max(2);
    let mst = kruskal(&mreach_matrix(points, min_samples));
    let mut live: BTreeSet<(usize, usize)> = mst.iter().map(|&(_, a, b)| (a, b)).collect();
    let mut owner: Vec<Option<usize>> = vec![Some(0); n];
    let mut clusters = vec![Cluster {
        parent: None,
        birth: 0.0,
        size: n,
        children: Vec::new(),
        leaving: Vec::new(),
    }];

    for &(w, a, b) in mst.iter().rev() {
        live.remove(&(a, b));
        let Some(c) = owner[a] else { continue };
        let lam = 1.0 / w.max(1e-12);
        let left = component(a, &live, n);
        let right = component(b, &live, n);
        let fall = |side: &BTreeSet<usize>, owner: &mut Vec<Option<usize>>, clusters: &mut Vec<Cluster>| {
            for &p in side {
                clusters[c].leaving.push((p, lam));
                owner[p] = None;
            }
        };
        match (left.len() >= mcs, right.len() >= mcs) {
            (true, true) => {
                for side in [&left, &right] {
                    let id = clusters.len();
                    clusters.push(Cluster {
                        parent: Some(c),
                        birth: lam,
                        size: side.len(),
                        children: Vec::new(),
                        leaving: Vec::new(),
                    });
                    clusters[c].children.push(id);
                    for &p in side {
                        owner[p] = Some(id);
                    }
                }
            }
            (true, false) => fall(&right, &mut owner, &mut clusters),
            (false, true) => fall(&left, &mut owner, &mut clusters),
            (false, false) => {
                fall(&left, &mut owner, &mut clusters);
                fall(&right, &mut owner, &mut clusters);
            }
        }
    }

    let stability: Vec<f64> = (0..clusters.len())
        .map(|i| {
            let c = &clusters[i];
            let own: f64 = c.leaving.iter().map(|&(_, l)| l - c.birth).sum();
            let kids: f64 = c
                .children
                .iter()
                .map(|&k| clusters[k].size as f64 * (clusters[k].birth - c.birth))
                .sum();
            own + kids
        })
        .collect();

    // Children always have larger ids, so a reverse sweep is bottom-up.
    let mut best = vec![0.0; clusters.len()];
    let mut keep = vec![false; clusters.len()];
    for i in (1..clusters.len()).rev() {
        let below: f64 = clusters[i].children.iter().map(|&k| best[k]).sum();
        if clusters[i].children.is_empty() || stability[i] > below {
            keep[i] = true;
            best[i] = stability[i];
        } else {
            best[i] = below;
        }
    }
    // Highest kept node on each root path wins.
    let mut chosen = Vec::new();
    let mut todo: Vec<usize> = clusters[0].children.clone();
    while let Some(i) = todo.pop() {
        if keep[i] {
            chosen.push(i);
        } else {
            todo.extend(clusters[i].children.iter().copied());
        }
    }

    let mut members: Vec<Vec<usize>> = chosen
        .iter()
        .map(|&root| {
            let mut out = Vec::new();
            let mut todo = vec![root];
            while let Some(i) = todo.pop() {
                out.extend(clusters[i].leaving.iter().map(|&(p, _)| p));
                todo.extend(clusters[i].children.iter().copied());
            }
            out.sort_unstable();
            out
        })
        .collect();
    members.sort_by(|x, y| y.len().cmp(&x.len()).then(x[0].cmp(&y[0])));
    let mut labels = vec![-1i64; n];
    for (l, m) in members.iter().enumerate() {
        for &p in m {
            labels[p] = l as i64;
        }
    }
    labels
}

/// Points whose labels disagree after mapping each cluster to the cluster
/// of the other labelling it overlaps most (noise maps to noise), taking
/// the worse direction.
pub fn disagreement(a: &[i64], b: &[i64]) -> usize {
    one_way(a, b).max(one_way(b, a))
}

fn one_way(a: &[i64], b: &[i64]) -> usize {
    use std::collections::BTreeMap;
    let mut overlap: BTreeMap<i64, BTreeMap<i64, usize>> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *overlap.entry(x).or_default().entry(y).or_default() += 1;
    }
    let map: BTreeMap<i64, i64> = overlap
        .iter()
        .map(|(&x, row)| {
            let best = if x < 0 {
                -1
            } else {
                *row.iter().max_by_key(|(_, &c)| c).unwrap().0
            };
            (x, best)
        })
        .collect();
    a.iter().zip(b).filter(|(x, y)| map[x] != **y).count()
}
