use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::angle::{angle_at_with, unit, unit_angle, AngleInterval, TripleWitness, RELATIVE_DEGENERACY};
use super::point::{sub, PointCloud};
use crate::error::{Error, Result};

/// One angle of the spectrum: the angle at `apex` between the arms toward
/// `arm1` and `arm2` (`arm1 < arm2`, both different from `apex`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub apex: usize,
    pub arm1: usize,
    pub arm2: usize,
    pub angle: f64,
}

impl SpectrumEntry {
    pub fn witness(&self, cloud: &PointCloud) -> TripleWitness {
        TripleWitness::with_angle(cloud, [self.apex, self.arm1, self.arm2], self.angle)
    }
}

/// Deterministic subsampling of the triple set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    pub max_triples: u64,
    pub seed: u64,
}

/// Number of (apex, unordered arm pair) triples of an `n`-point cloud.
pub fn triple_count(n: usize) -> u64 {
    let n = n as u64;
    if n < 3 {
        return 0;
    }
    n * ((n - 1) * (n - 2) / 2)
}

fn check_size(cloud: &PointCloud) -> Result<()> {
    if cloud.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: cloud.len() });
    }
    Ok(())
}

pub(crate) fn degeneracy_threshold(cloud: &PointCloud) -> f64 {
    (RELATIVE_DEGENERACY * cloud.diameter()).max(super::angle::ABSOLUTE_DEGENERACY)
}

/// Unit vectors from `apex` toward every other point, in index order
/// (the apex itself is skipped).
pub(crate) fn directions_from(cloud: &PointCloud, apex: usize, threshold: f64) -> Result<Vec<Vec<f64>>> {
    let a = cloud.point(apex).coords();
    cloud
        .points()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != apex)
        .map(|(_, q)| unit(&sub(q.coords(), a), threshold))
        .collect()
}

#[inline]
fn other_index(apex: usize, o: usize) -> usize {
    if o < apex {
        o
    } else {
        o + 1
    }
}

/// Maps a lexicographic rank to a triple `(apex, arm1, arm2)`.
fn unrank(n: usize, rank: u64) -> (usize, usize, usize) {
    let m = (n - 1) as u64;
    let per_apex = m * (m - 1) / 2;
    let apex = (rank / per_apex) as usize;
    let mut q = rank % per_apex;
    let mut a = 0u64;
    while q >= m - 1 - a {
        q -= m - 1 - a;
        a += 1;
    }
    let b = a + 1 + q;
    (apex, other_index(apex, a as usize), other_index(apex, b as usize))
}

fn sampled_ranks(n: usize, sampling: &Sampling) -> Option<Vec<u64>> {
    let total = triple_count(n);
    if sampling.max_triples >= total {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let mut ranks: Vec<u64> = index::sample(&mut rng, total as usize, sampling.max_triples as usize)
        .into_iter()
        .map(|r| r as u64)
        .collect();
    ranks.sort_unstable();
    Some(ranks)
}

/// Parallel fold over the spectrum. `fold` sees entries of each apex in
/// lexicographic order; partial results are combined in apex order, so any
/// associative `reduce` gives a scheduling-independent result.
pub fn spectrum_reduce<A, I, F, R>(
    cloud: &PointCloud,
    sampling: Option<Sampling>,
    init: I,
    fold: F,
    reduce: R,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, &SpectrumEntry) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    check_size(cloud)?;
    let n = cloud.len();
    let threshold = degeneracy_threshold(cloud);
    if let Some(ranks) = sampling.as_ref().and_then(|s| sampled_ranks(n, s)) {
        let mut acc = init();
        for r in ranks {
            let (apex, arm1, arm2) = unrank(n, r);
            let angle = angle_at_with(
                cloud.point(apex).coords(),
                cloud.point(arm1).coords(),
                cloud.point(arm2).coords(),
                threshold,
            )?;
            acc = fold(acc, &SpectrumEntry { apex, arm1, arm2, angle });
        }
        return Ok(acc);
    }
    let partials: Vec<A> = (0..n)
        .into_par_iter()
        .map(|apex| -> Result<A> {
            let dirs = directions_from(cloud, apex, threshold)?;
            let mut acc = init();
            for a in 0..dirs.len() {
                for b in a + 1..dirs.len() {
                    let angle = unit_angle(&dirs[a], &dirs[b]);
                    let e = SpectrumEntry { apex, arm1: other_index(apex, a), arm2: other_index(apex, b), angle };
                    acc = fold(acc, &e);
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<A>>>()?;
    Ok(partials.into_iter().fold(init(), reduce))
}

/// All angles of the cloud (or a seeded subsample of at most
/// `max_triples`), ordered lexicographically by `(apex, arm1, arm2)`.
pub fn angle_spectrum(cloud: &PointCloud, sampling: Option<Sampling>) -> Result<Vec<SpectrumEntry>> {
    spectrum_reduce(
        cloud,
        sampling,
        Vec::new,
        |mut v, e| {
            v.push(*e);
            v
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )
}

/// First triple, in lexicographic order, whose angle lies in the open window.
/// Without sampling a `None` answer is exhaustive.
pub fn spectrum_hits(
    cloud: &PointCloud,
    window: &AngleInterval,
    sampling: Option<Sampling>,
) -> Result<Option<TripleWitness>> {
    check_size(cloud)?;
    let n = cloud.len();
    if let Some(ranks) = sampling.as_ref().and_then(|s| sampled_ranks(n, s)) {
        let threshold = degeneracy_threshold(cloud);
        for r in ranks {
            let (apex, arm1, arm2) = unrank(n, r);
            let angle = angle_at_with(
                cloud.point(apex).coords(),
                cloud.point(arm1).coords(),
                cloud.point(arm2).coords(),
                threshold,
            )?;
            if window.contains(angle) {
                return Ok(Some(TripleWitness::with_angle(cloud, [apex, arm1, arm2], angle)));
            }
        }
        return Ok(None);
    }
    let threshold = degeneracy_threshold(cloud);
    let found = (0..n)
        .into_par_iter()
        .map(|apex| -> Result<Option<SpectrumEntry>> {
            let dirs = directions_from(cloud, apex, threshold)?;
            for a in 0..dirs.len() {
                for b in a + 1..dirs.len() {
                    let angle = unit_angle(&dirs[a], &dirs[b]);
                    if window.contains(angle) {
                        return Ok(Some(SpectrumEntry {
                            apex,
                            arm1: other_index(apex, a),
                            arm2: other_index(apex, b),
                            angle,
                        }));
                    }
                }
            }
            Ok(None)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(None),
        Some(r) => Ok(r?.map(|e| e.witness(cloud))),
    }
}
