use alloc::vec::Vec;

use super::{Metric, PointView};
use crate::{Error, Result};

/// Distance from each point to its `min_samples`-th nearest other point.
pub fn core_distances(points: PointView<'_>, metric: Metric, min_samples: usize) -> Result<Vec<f64>> {
    let n = points.len();
    if min_samples == 0 {
        return Err(Error::validation("min_samples", "must be at least 1"));
    }
    if n < min_samples + 1 {
        return Err(Error::validation(
            "points",
            alloc::format!("{n} points cannot supply {min_samples} neighbors each"),
        ));
    }
    let core_of = |i: usize| -> f64 {
        let a = points.row(i);
        let mut d: Vec<f64> = (0..n)
            .filter(|&j| j != i)
            .map(|j| metric.distance(a, points.row(j)))
            .collect();
        let (_, kth, _) = d.select_nth_unstable_by(min_samples - 1, f64::total_cmp);
        *kth
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        Ok((0..n).into_par_iter().map(core_of).collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok((0..n).map(core_of).collect())
    }
}

/// `max(core(a), core(b), d(a, b))` over a fixed point set.
#[derive(Debug, Clone, Copy)]
pub struct MutualReachability<'a> {
    points: PointView<'a>,
    cores: &'a [f64],
    metric: Metric,
}

impl<'a> MutualReachability<'a> {
    pub fn new(points: PointView<'a>, cores: &'a [f64], metric: Metric) -> Self {
        assert_eq!(points.len(), cores.len(), "one core distance per point");
        MutualReachability { points, cores, metric }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        let d = self.metric.distance(self.points.row(a), self.points.row(b));
        d.max(self.cores[a]).max(self.cores[b])
    }
}

/// Convenience wrapper: mutual reachability of one pair.
pub fn mutual_reachability(points: PointView<'_>, cores: &[f64], metric: Metric, a: usize, b: usize) -> f64 {
    MutualReachability::new(points, cores, metric).distance(a, b)
}
