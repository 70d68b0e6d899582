use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::DyadicGrid;
use crate::error::{Error, Result};

/// A dyadic cube: `level` and per-axis index in `[0, 2^level)`.
pub type Cube = (u32, Vec<u64>);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContentResult {
    pub value: f64,
    pub exponent: f64,
    /// Minimizing antichain, sorted by level then index.
    pub cover: Vec<Cube>,
}

impl ContentResult {
    /// Whether the cover is an antichain covering exactly the occupied cells
    /// and summing to `value`.
    pub fn verify(&self, grid: &DyadicGrid, tol: f64) -> bool {
        let m = grid.levels();
        let mut covered = 0u128;
        for (a, (la, ia)) in self.cover.iter().enumerate() {
            for (lb, ib) in &self.cover[a + 1..] {
                let (lo, hi, li, hiidx) = if la <= lb { (la, lb, ia, ib) } else { (lb, la, ib, ia) };
                if hiidx.iter().zip(li).all(|(&x, &y)| x >> (hi - lo) == y) {
                    return false;
                }
            }
            let inside = grid
                .occupied()
                .iter()
                .filter(|c| c.iter().zip(ia).all(|(&x, &y)| x >> (m - la) == y))
                .count();
            if inside == 0 {
                return false;
            }
            covered += inside as u128;
        }
        covered == grid.len() as u128 && (cover_value(&self.cover, self.exponent, m) - self.value).abs() <= tol
    }
}

/// `edge^s` for a level-`level` cube.
pub(crate) fn weight(level: u32, s: f64) -> f64 {
    (-(level as f64) * s).exp2()
}

/// Sum of `edge^s` over a cover, accumulated as `Σ_j count_j · 2^(-j s)` in
/// level order so that equal covers give bit-identical values.
pub fn cover_value(cover: &[Cube], s: f64, levels: u32) -> f64 {
    let mut counts = vec![0u64; levels as usize + 1];
    for (l, _) in cover {
        counts[*l as usize] += 1;
    }
    counts.iter().enumerate().map(|(j, &c)| c as f64 * weight(j as u32, s)).sum()
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Node {
    /// Content of the occupied cells inside this cube.
    pub value: f64,
    /// Whether the cube itself is at least as cheap as its children.
    pub take_self: bool,
}

/// Bottom-up dynamic program over the occupied part of the cube tree; entry
/// `j` holds the nonempty level-`j` cubes.
pub(crate) fn content_tree(grid: &DyadicGrid, s: f64) -> Vec<BTreeMap<Vec<u64>, Node>> {
    let m = grid.levels();
    let mut levels: Vec<BTreeMap<Vec<u64>, Node>> = vec![BTreeMap::new(); m as usize + 1];
    let leaf = weight(m, s);
    levels[m as usize] = grid.occupied().iter().map(|c| (c.clone(), Node { value: leaf, take_self: true })).collect();
    for j in (0..m).rev() {
        let mut groups: BTreeMap<Vec<u64>, Vec<f64>> = BTreeMap::new();
        for (c, node) in &levels[j as usize + 1] {
            groups.entry(c.iter().map(|i| i >> 1).collect()).or_default().push(node.value);
        }
        let own = weight(j, s);
        let parents: Vec<(Vec<u64>, Node)> = groups
            .into_par_iter()
            .map(|(c, children)| {
                let sum: f64 = children.iter().sum();
                let take_self = own <= sum;
                (c, Node { value: if take_self { own } else { sum }, take_self })
            })
            .collect();
        levels[j as usize] = parents.into_iter().collect();
    }
    levels
}

fn extract_cover(tree: &[BTreeMap<Vec<u64>, Node>]) -> Vec<Cube> {
    let mut cover = Vec::new();
    let mut open: Vec<Vec<u64>> = tree[0].keys().cloned().collect();
    for (j, level) in tree.iter().enumerate() {
        let mut next = Vec::new();
        for c in &open {
            let node = level[c];
            if node.take_self {
                cover.push((j as u32, c.clone()));
            } else {
                next.push(c.clone());
            }
        }
        if let Some(below) = tree.get(j + 1) {
            let expand: std::collections::BTreeSet<&Vec<u64>> = next.iter().collect();
            open = below
                .keys()
                .filter(|c| expand.contains(&c.iter().map(|i| i >> 1).collect::<Vec<u64>>()))
                .cloned()
                .collect();
        } else {
            open.clear();
        }
    }
    cover
}

fn check_exponent(s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent must be positive, got {s}")));
    }
    Ok(())
}

/// Dyadic-cube Hausdorff content: the least `Σ edge^s` over covers of the
/// occupied cells by dyadic cubes. On ties the coarser cube is kept.
pub fn dyadic_content(grid: &DyadicGrid, s: f64) -> Result<ContentResult> {
    check_exponent(s)?;
    if grid.is_empty() {
        return Ok(ContentResult { value: 0.0, exponent: s, cover: Vec::new() });
    }
    let tree = content_tree(grid, s);
    let cover = extract_cover(&tree);
    Ok(ContentResult { value: cover_value(&cover, s, grid.levels()), exponent: s, cover })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseCube {
    pub cube: Cube,
    /// Content of the grid inside the cube over `edge^s`.
    pub normalized_content: f64,
    pub threshold: f64,
    pub meets_threshold: bool,
}

/// Cube maximizing `content(grid ∩ C) / edge(C)^s` among levels `0..=max_level`;
/// ties go to the smaller level, then the smaller index.
pub(crate) fn best_cube(grid: &DyadicGrid, s: f64, max_level: u32) -> (Cube, f64) {
    let tree = content_tree(grid, s);
    let mut best: Option<(Cube, f64)> = None;
    for (j, level) in tree.iter().enumerate().take(max_level as usize + 1) {
        let w = weight(j as u32, s);
        for (c, node) in level {
            let r = node.value / w;
            if best.as_ref().is_none_or(|(_, b)| r > *b) {
                best = Some(((j as u32, c.clone()), r));
            }
        }
    }
    best.expect("nonempty grid")
}

/// The densest dyadic cube at exponent `s`, compared against `2^(-2-s)`.
pub fn dense_cube(grid: &DyadicGrid, s: f64) -> Result<DenseCube> {
    check_exponent(s)?;
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let (cube, normalized_content) = best_cube(grid, s, grid.levels());
    let threshold = (-2.0 - s).exp2();
    Ok(DenseCube { cube, normalized_content, threshold, meets_threshold: normalized_content >= threshold })
}
