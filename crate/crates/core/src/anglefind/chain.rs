use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{dist, sub, unit, unit_angle, PointCloud, TripleWitness, ABSOLUTE_DEGENERACY};

/// Candidate sets larger than this are thinned by a greedy packing before the
/// cubic triple search.
const SEARCH_CAP: usize = 64;

/// One link of the chain: the angle at `q` between `p` and `r` is in the window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub angle: f64,
    /// Radius of the neighborhood of the previous `P` this step was found in
    /// (0 for the first step).
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupplementaryWitness {
    /// Apex `Q_k`, arms `Q_l` and `R_k`.
    pub triple: TripleWitness,
    /// How far the angle falls outside `(180 - alpha - delta, 180 - alpha + delta)`; 0 if inside.
    pub epsilon_prime: f64,
    /// The two chain steps `(l, k)` whose `Q -> P` directions agree.
    pub steps_used: (usize, usize),
    pub chain: Vec<ChainStep>,
    /// Always true: finite clouds lack the local density the argument needs.
    pub heuristic: bool,
}

struct Search<'a> {
    cloud: &'a PointCloud,
    lo: f64,
    hi: f64,
}

impl Search<'_> {
    fn coords(&self, i: usize) -> &[f64] {
        self.cloud.point(i).coords()
    }

    /// Greedy packing of `candidates` at the finest dyadic fraction of their
    /// spread that keeps at most `SEARCH_CAP` points.
    fn thin(&self, candidates: Vec<usize>) -> Vec<usize> {
        if candidates.len() <= SEARCH_CAP {
            return candidates;
        }
        let first = self.coords(candidates[0]);
        let spread = candidates.iter().map(|&i| dist(first, self.coords(i))).fold(0.0, f64::max);
        let pack = |eps: f64| -> Vec<usize> {
            let mut kept: Vec<usize> = Vec::new();
            for &i in &candidates {
                if kept.iter().all(|&j| dist(self.coords(i), self.coords(j)) > 2.0 * eps) {
                    kept.push(i);
                }
            }
            kept
        };
        let mut eps = spread;
        let mut kept = pack(eps);
        for _ in 0..64 {
            let finer = pack(eps / 2.0);
            if finer.len() > SEARCH_CAP {
                break;
            }
            eps /= 2.0;
            kept = finer;
        }
        kept
    }

    /// Best in-window triple among `set`: directions aligned with `previous`
    /// (within `tol` degrees) first, then the longest shorter arm, then indices.
    fn best_triple(&self, set: &[usize], previous: Option<(&[f64], f64)>, radius: f64) -> Option<ChainStep> {
        let mut best: Option<(bool, f64, [usize; 3], ChainStep)> = None;
        for &q in set {
            let qc = self.coords(q);
            for (a, &p) in set.iter().enumerate() {
                for &r in &set[a + 1..] {
                    if p == q || r == q {
                        continue;
                    }
                    let (Ok(up), Ok(ur)) = (
                        unit(&sub(self.coords(p), qc), ABSOLUTE_DEGENERACY),
                        unit(&sub(self.coords(r), qc), ABSOLUTE_DEGENERACY),
                    ) else {
                        continue;
                    };
                    let angle = unit_angle(&up, &ur);
                    if !(self.lo < angle && angle < self.hi) {
                        continue;
                    }
                    let arm = dist(qc, self.coords(p)).min(dist(qc, self.coords(r)));
                    // either arm may play the role of P
                    for (pp, rr, dir) in [(p, r, &up), (r, p, &ur)] {
                        let aligned = previous.is_some_and(|(d, tol)| unit_angle(d, dir) < tol);
                        let key = (aligned, arm, [q, pp, rr]);
                        let wins = match &best {
                            None => true,
                            Some((ba, barm, bidx, _)) => match key.0.cmp(ba).reverse() {
                                Ordering::Less => true,
                                Ordering::Greater => false,
                                Ordering::Equal => match barm.total_cmp(&key.1) {
                                    Ordering::Less => true,
                                    Ordering::Greater => false,
                                    Ordering::Equal => key.2 < *bidx,
                                },
                            },
                        };
                        if wins {
                            best = Some((key.0, key.1, key.2, ChainStep { p: pp, q, r: rr, angle, radius }));
                        }
                    }
                }
            }
        }
        best.map(|b| b.3)
    }

    fn direction(&self, s: &ChainStep) -> Vec<f64> {
        unit(&sub(self.coords(s.p), self.coords(s.q)), ABSOLUTE_DEGENERACY).expect("distinct points")
    }
}

/// Builds a chain of in-window triples, each inside a neighborhood of the
/// previous `P`, then looks for two steps `l < k` whose `Q -> P` directions
/// differ by less than `epsilon` (radians) and returns the angle at `Q_k`
/// between `Q_l` and `R_k`, which should be near `180 - alpha`.
///
/// The neighborhood of `P_m` starts at radius `epsilon · min(|Q_mP_m|, |Q_mR_m|)`
/// and doubles (up to half the shorter arm) until it holds an in-window
/// triple; on a finite cloud the literal radius is usually too small.
pub fn supplementary_chain(
    cloud: &PointCloud,
    alpha: f64,
    delta: f64,
    epsilon: f64,
    max_steps: usize,
) -> Result<Option<SupplementaryWitness>> {
    let (lo, hi) = (alpha - delta, alpha + delta);
    if !(delta > 0.0) || hi <= 0.0 || lo >= 180.0 || !alpha.is_finite() {
        return Err(Error::InvalidWindow);
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if cloud.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: cloud.len() });
    }
    let search = Search { cloud, lo, hi };
    let tol = epsilon.to_degrees();

    let all: Vec<usize> = (0..cloud.len()).collect();
    let Some(first) = search.best_triple(&search.thin(all), None, 0.0) else {
        return Ok(None);
    };
    let mut chain = vec![first];
    while chain.len() < max_steps.max(1) {
        let last = *chain.last().unwrap();
        let center = search.coords(last.p);
        let arm = dist(search.coords(last.q), center).min(dist(search.coords(last.q), search.coords(last.r)));
        let heading = search.direction(&chain[0]);
        let mut radius = epsilon * arm;
        let mut next = None;
        while radius <= 0.5 * arm {
            let near: Vec<usize> = (0..cloud.len()).filter(|&i| dist(search.coords(i), center) <= radius).collect();
            if near.len() >= 3 {
                next = search.best_triple(&search.thin(near), Some((&heading, tol)), radius);
                if next.is_some() {
                    break;
                }
            }
            radius *= 2.0;
        }
        match next {
            Some(step) => chain.push(step),
            None => break,
        }
    }

    let target = 180.0 - alpha;
    let mut best: Option<(f64, usize, usize, TripleWitness)> = None;
    for k in 1..chain.len() {
        let dk = search.direction(&chain[k]);
        for l in 0..k {
            if unit_angle(&search.direction(&chain[l]), &dk) >= tol {
                continue;
            }
            let (ql, qk, rk) = (chain[l].q, chain[k].q, chain[k].r);
            if ql == qk || ql == rk {
                continue;
            }
            let Ok(triple) = TripleWitness::from_cloud(cloud, qk, ql, rk) else { continue };
            let eps_prime = ((triple.angle - target).abs() - delta).max(0.0);
            if best.as_ref().is_none_or(|b| eps_prime < b.0) {
                best = Some((eps_prime, l, k, triple));
            }
        }
    }
    Ok(best.map(|(epsilon_prime, l, k, triple)| SupplementaryWitness {
        triple,
        epsilon_prime,
        steps_used: (l, k),
        chain,
        heuristic: true,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(side: usize) -> PointCloud {
        let mut pts = Vec::new();
        for i in 0..side {
            for j in 0..side {
                let s = (side - 1) as f64;
                pts.push(vec![i as f64 / s, j as f64 / s]);
            }
        }
        PointCloud::from_coords(2, pts).unwrap()
    }

    #[test]
    fn square_grid_sixty() {
        let w = supplementary_chain(&grid(64), 60.0, 2.0, 0.05, 8).unwrap().expect("chain survives");
        assert!(w.triple.verify(1e-9));
        let a = w.triple.angle;
        assert!(118.0 - w.epsilon_prime - 1e-12 <= a && a <= 122.0 + w.epsilon_prime + 1e-12, "{w:?}");
        assert!(w.epsilon_prime < 5.0, "{}", w.epsilon_prime);
        assert!(w.heuristic);
        for s in &w.chain {
            assert!(58.0 < s.angle && s.angle < 62.0);
        }
    }

    #[test]
    fn triangular_lattice() {
        let h = 3f64.sqrt() / 2.0;
        let mut pts = Vec::new();
        for i in 0..30 {
            for j in 0..30 {
                pts.push(vec![i as f64 + 0.5 * j as f64, h * j as f64]);
            }
        }
        let c = PointCloud::from_coords(2, pts).unwrap();
        let w = supplementary_chain(&c, 60.0, 1.0, 0.05, 6).unwrap().expect("lattice has 60 and 120");
        assert!((w.triple.angle - 120.0).abs() <= 1.0 + w.epsilon_prime);
        assert!(w.epsilon_prime < 1.0, "{w:?}");
    }

    #[test]
    fn no_start() {
        // a segment has only 0 and 180
        let c = PointCloud::from_coords(1, (0..20).map(|i| vec![i as f64]).collect()).unwrap();
        assert_eq!(supplementary_chain(&c, 60.0, 2.0, 0.05, 5).unwrap(), None);
    }

    #[test]
    fn invalid_window() {
        let g = grid(4);
        assert_eq!(supplementary_chain(&g, 60.0, 0.0, 0.05, 5), Err(Error::InvalidWindow));
        assert_eq!(supplementary_chain(&g, 200.0, 5.0, 0.05, 5), Err(Error::InvalidWindow));
        assert!(supplementary_chain(&g, 60.0, 2.0, 1.5, 5).is_err());
    }
}
