use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{dist, Point, PointCloud};

/// Uniform grid over the first (at most three) coordinates. Projection never
/// increases distances, so any point within `cell` of a query sits in one of
/// the neighboring cells.
pub(crate) struct GridIndex {
    cell: f64,
    axes: usize,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl GridIndex {
    pub(crate) fn new(dimension: usize, cell: f64) -> Self {
        GridIndex { cell, axes: dimension.min(3), buckets: HashMap::new() }
    }

    fn key(&self, p: &[f64]) -> Vec<i64> {
        p[..self.axes].iter().map(|x| (x / self.cell).floor() as i64).collect()
    }

    pub(crate) fn insert(&mut self, p: &[f64], id: usize) {
        let key = self.key(p);
        self.buckets.entry(key).or_default().push(id);
    }

    /// Ids in the 3^axes block around `p`, each bucket in insertion order.
    pub(crate) fn neighbors(&self, p: &[f64]) -> impl Iterator<Item = usize> + '_ {
        let base = self.key(p);
        let count = 3usize.pow(self.axes as u32);
        (0..count).flat_map(move |mut code| {
            let mut key = base.clone();
            for k in key.iter_mut() {
                *k = k.saturating_add((code % 3) as i64 - 1);
                code /= 3;
            }
            self.buckets.get(&key).into_iter().flatten().copied()
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackingReport {
    pub epsilon: f64,
    pub count: usize,
    pub centers: Vec<Point>,
    /// Cloud indices of the centers.
    #[serde(skip)]
    pub indices: Vec<usize>,
}

impl PackingReport {
    /// Checks disjointness of the centers and maximality against `cloud`,
    /// by direct pairwise comparison.
    pub fn verify(&self, cloud: &PointCloud) -> bool {
        let two_eps = 2.0 * self.epsilon;
        let c = &self.centers;
        let disjoint = (0..c.len()).all(|i| (i + 1..c.len()).all(|j| c[i].distance(&c[j]) > two_eps));
        let maximal = cloud.points().iter().all(|p| c.iter().any(|q| p.distance(q) <= two_eps));
        disjoint && maximal && self.count == c.len()
    }
}

/// Greedy maximal packing: walks the cloud in index order and keeps a point
/// when it is more than `2ε` from every kept center, so the closed
/// `ε`-balls around the centers are disjoint.
pub fn packing_number_greedy(cloud: &PointCloud, epsilon: f64) -> Result<PackingReport> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let indices = greedy_indices(cloud, epsilon);
    Ok(PackingReport {
        epsilon,
        count: indices.len(),
        centers: indices.iter().map(|&i| cloud.point(i).clone()).collect(),
        indices,
    })
}

pub(crate) fn greedy_indices(cloud: &PointCloud, epsilon: f64) -> Vec<usize> {
    let two_eps = 2.0 * epsilon;
    let mut grid = GridIndex::new(cloud.dimension(), two_eps);
    let mut kept = Vec::new();
    for (i, p) in cloud.points().iter().enumerate() {
        let x = p.coords();
        if grid.neighbors(x).all(|j| dist(x, cloud.point(j).coords()) > two_eps) {
            grid.insert(x, i);
            kept.push(i);
        }
    }
    kept
}
