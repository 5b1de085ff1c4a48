//! Numerical survey of which edge partitions avoid gimbal lock.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::function::gimbal_jacobian;
use super::labels::CocycleLabels;
use super::loops::build_gimbal_loops;
use crate::geometry::GeometryError;
use crate::triangulation::{Flag, Perm4, TEdge, Triangulation};

/// Fixed points closer than this in the chordal metric count as equal.
const FIXED_POINT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    pub sim: Vec<usize>,
    /// Smallest singular value of `Dg` at `T = (2π, …, 2π)`; `None` if the
    /// loops could not be built.
    pub sigma_min: Option<f64>,
    /// Two edges of `sim` share their fixed-point sets; only computed for
    /// 1-vertex triangulations.
    pub fixed_points_coincide: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub exhaustive: bool,
    pub rows: Vec<ProbeRow>,
}

impl ProbeReport {
    /// Rows whose smallest singular value exceeds `threshold`.
    pub fn avoiding(&self, threshold: f64) -> impl Iterator<Item = &ProbeRow> {
        self.rows.iter().filter(move |r| r.sigma_min.is_some_and(|s| s > threshold))
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1, |acc, i| acc * (n as u128 - i) / (i + 1))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Smallest singular value of the float `Dg` at `T = 2π` for one partition.
pub fn sigma_min(t: &Triangulation, labels: &CocycleLabels<f64>, sim: &[usize]) -> Option<f64> {
    let loops = build_gimbal_loops(t, sim).ok()?;
    let values = vec![std::f64::consts::TAU; sim.len()];
    let dg = gimbal_jacobian(&loops, labels, sim, &values);
    let m = DMatrix::from_fn(dg.len(), sim.len(), |r, c| dg[r][c]);
    m.svd(false, false).singular_values.iter().cloned().reduce(f64::min)
}

/// Shortest path in the link of the vertex of `from`, by β- and γ-edges,
/// from `from` to every reachable vertex of the doubly truncated complex.
fn link_paths(t: &Triangulation, from: Flag) -> BTreeMap<Flag, Vec<TEdge>> {
    let mut out = BTreeMap::from([(t.flag_key(from), Vec::new())]);
    let mut queue = VecDeque::from([from]);
    while let Some(f) = queue.pop_front() {
        let here = out[&t.flag_key(f)].clone();
        for p in [f, t.glued_flag(f)] {
            for e in [TEdge::beta(p), TEdge::gamma(p)] {
                let key = t.flag_key(e.end());
                if let std::collections::btree_map::Entry::Vacant(slot) = out.entry(key) {
                    let mut path = here.clone();
                    path.push(e);
                    slot.insert(path);
                    queue.push_back(e.end());
                }
            }
        }
    }
    out
}

fn fixed_points(m: [[Complex64; 2]; 2]) -> Vec<Option<Complex64>> {
    // Solutions of c z² + (d − a) z − b = 0 on the Riemann sphere; None is ∞.
    let [[a, b], [c, d]] = m;
    let scale = [a, b, c, d].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (a, b, c, d) = (a / scale, b / scale, c / scale, d / scale);
    if c.norm() < 1e-14 {
        let mut out = vec![None];
        if (d - a).norm() > 1e-14 {
            out.push(Some(b / (d - a)));
        }
        return out;
    }
    let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
    vec![Some((a - d + disc) / (2.0 * c)), Some((a - d - disc) / (2.0 * c))]
}

fn chordal(a: Option<Complex64>, b: Option<Complex64>) -> f64 {
    match (a, b) {
        (None, None) => 0.0,
        (Some(z), None) | (None, Some(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
        (Some(z), Some(w)) => 2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt()),
    }
}

fn same_set(a: &[Option<Complex64>], b: &[Option<Complex64>]) -> bool {
    let covered = |x: &[Option<Complex64>], y: &[Option<Complex64>]| {
        x.iter().all(|p| y.iter().any(|q| chordal(*p, *q) < FIXED_POINT_TOLERANCE))
    };
    covered(a, b) && covered(b, a)
}

/// Fixed-point sets `F_e` of the holonomy of every edge, viewed as a loop
/// at the vertex of a 1-vertex triangulation. All holonomies use the frame of
/// one base flag.
pub fn edge_fixed_points(t: &Triangulation, labels: &CocycleLabels<f64>) -> Option<Vec<Vec<Option<Complex64>>>> {
    if t.num_vertices() != 1 {
        return None;
    }
    let base = t.hexagon_flag(0, 0);
    let paths = link_paths(t, base);
    let mut out = Vec::with_capacity(t.num_edges());
    for class in t.edge_classes() {
        let rep = class.reps[0];
        let (tail, head) = rep.oriented();
        let perm = Perm4::all()
            .find(|p| p.apply(0) == tail && p.apply(1) == head)
            .expect("a permutation exists");
        let start = Flag::new(rep.tet, perm);
        let alpha = TEdge::alpha(start);
        let mut path = paths.get(&t.flag_key(start))?.clone();
        path.push(alpha);
        let back = paths.get(&t.flag_key(alpha.end()))?;
        path.extend(back.iter().rev().map(|e| e.reverse()));
        let m = labels.pgl2_path(t, &path)?;
        out.push(fixed_points(m.approx()));
    }
    Some(out)
}

/// Survey of partitions `E^∼` of size `3o`: exhaustive when `o ≤ 2` and the
/// count fits in `budget`, otherwise `budget` distinct samples drawn from
/// `seed`.
pub fn probe_partitions(t: &Triangulation, nu: &[f64], budget: usize, seed: u64) -> Result<ProbeReport, GeometryError> {
    let labels = CocycleLabels::new(t, nu)?;
    let (m, k) = (t.num_edges(), 3 * t.num_vertices());
    let total = binomial(m, k);
    let exhaustive = t.num_vertices() <= 2 && total <= budget as u128;
    let subsets = if k > m {
        Vec::new()
    } else if exhaustive {
        combinations(m, k)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = BTreeSet::new();
        let target = (budget as u128).min(total) as usize;
        while seen.len() < target {
            let mut s = sample(&mut rng, m, k).into_vec();
            s.sort_unstable();
            seen.insert(s);
        }
        seen.into_iter().collect()
    };
    let fixed = edge_fixed_points(t, &labels);
    let rows = subsets
        .into_iter()
        .map(|sim| {
            let coincide = fixed.as_ref().map(|f| {
                sim.iter()
                    .enumerate()
                    .any(|(i, &a)| sim[i + 1..].iter().any(|&b| same_set(&f[a], &f[b])))
            });
            ProbeRow {
                sigma_min: sigma_min(t, &labels, &sim),
                fixed_points_coincide: coincide,
                sim,
            }
        })
        .collect();
    Ok(ProbeReport { exhaustive, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(11, 3).len() as u128, binomial(11, 3));
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn fixed_points_of_loxodromic() {
        let m = [
            [Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        ];
        let f = fixed_points(m);
        assert!(same_set(&f, &[None, Some(Complex64::new(0.0, 0.0))]));
    }
}
