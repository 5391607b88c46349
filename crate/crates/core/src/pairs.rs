//! Suprema of `|f(x) − f(y)| / w(|x − y|)` over point pairs on the torus.
//!
//! Small grids are searched exhaustively. Larger grids use a deterministic
//! plan: every pair inside each of several random translates of a coarse
//! sublattice, plus every nearest-neighbour pair (axial and diagonal).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::spectral::ScalarField2D;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PairPlan {
    /// Largest `n` searched over all pairs.
    pub exhaustive_limit: usize,
    pub translates: usize,
    /// Sublattice points per axis.
    pub sublattice: usize,
    pub seed: u64,
}

impl Default for PairPlan {
    fn default() -> Self {
        PairPlan {
            exhaustive_limit: 48,
            translates: 64,
            sublattice: 16,
            seed: 0,
        }
    }
}

/// Largest observed ratio and where it occurred.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairMax {
    pub ratio: f64,
    /// Grid indices `((ix, iy), (jx, jy))` of the maximizing pair.
    pub witness: Option<((usize, usize), (usize, usize))>,
    pub distance: f64,
    pub pairs: u64,
    pub exhaustive: bool,
}

type Cand = (f64, usize, usize);

fn better(a: Cand, b: Cand) -> Cand {
    if b.0 > a.0 {
        b
    } else {
        a
    }
}

pub fn max_pair_ratio<W>(field: &ScalarField2D, weight: W, plan: &PairPlan) -> PairMax
where
    W: Fn(f64) -> f64 + Sync,
{
    let g = field.grid();
    let n = g.n();
    let v = field.physical();
    let exhaustive = n <= plan.exhaustive_limit;
    let ratio = |i: usize, j: usize, w: f64| (v[i] - v[j]).abs() / w;

    let (best, pairs) = if exhaustive {
        // Pairs sharing a displacement share a distance: one weight per shift.
        let per_shift: Vec<Cand> = (1..n * n)
            .into_par_iter()
            .map(|s| {
                let (sx, sy) = (s % n, s / n);
                let w = weight(g.torus_distance((0, 0), (sx, sy)));
                let mut b: Cand = (0.0, 0, 0);
                for iy in 0..n {
                    for ix in 0..n {
                        let i = iy * n + ix;
                        let j = ((iy + sy) % n) * n + (ix + sx) % n;
                        b = better(b, (ratio(i, j, w), i, j));
                    }
                }
                b
            })
            .collect();
        let best = per_shift.into_iter().fold((0.0, 0, 0), better);
        (best, ((n * n) * (n * n - 1)) as u64)
    } else {
        let m = plan.sublattice.clamp(2, n);
        let stride = n / m;
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        let offsets: Vec<(usize, usize)> = (0..plan.translates)
            .map(|_| (rng.random_range(0..stride), rng.random_range(0..stride)))
            .collect();
        let per_translate: Vec<Cand> = offsets
            .par_iter()
            .map(|&(ox, oy)| {
                let pts: Vec<(usize, usize)> = (0..m * m)
                    .map(|k| ((ox + (k % m) * stride) % n, (oy + (k / m) * stride) % n))
                    .collect();
                let mut b: Cand = (0.0, 0, 0);
                for (a, &p) in pts.iter().enumerate() {
                    for &q in &pts[a + 1..] {
                        let w = weight(g.torus_distance(p, q));
                        let (i, j) = (g.index(p.0, p.1), g.index(q.0, q.1));
                        b = better(b, (ratio(i, j, w), i, j));
                    }
                }
                b
            })
            .collect();
        let shifts = [(1, 0), (0, 1), (1, 1), (1, n - 1)];
        let weights: Vec<f64> = shifts
            .iter()
            .map(|&s| weight(g.torus_distance((0, 0), s)))
            .collect();
        let neighbours: Vec<Cand> = (0..n)
            .into_par_iter()
            .map(|iy| {
                let mut b: Cand = (0.0, 0, 0);
                for ix in 0..n {
                    let i = iy * n + ix;
                    for (&(sx, sy), &w) in shifts.iter().zip(&weights) {
                        let j = ((iy + sy) % n) * n + (ix + sx) % n;
                        b = better(b, (ratio(i, j, w), i, j));
                    }
                }
                b
            })
            .collect();
        let best = per_translate
            .into_iter()
            .chain(neighbours)
            .fold((0.0, 0, 0), better);
        let count = plan.translates * (m * m) * (m * m - 1) / 2 + 4 * n * n;
        (best, count as u64)
    };

    let (r, i, j) = best;
    let witness = (r > 0.0).then(|| ((i % n, i / n), (j % n, j / n)));
    PairMax {
        ratio: r,
        witness,
        distance: witness.map_or(0.0, |(p, q)| g.torus_distance(p, q)),
        pairs,
        exhaustive,
    }
}
