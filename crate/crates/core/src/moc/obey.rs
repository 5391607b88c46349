use serde::Serialize;

use super::Moc;
use crate::pairs::{max_pair_ratio, PairPlan};
use crate::spectral::{Grid2D, ScalarField2D};

/// Result of testing `|f(x) − f(y)| < ω(|x − y|)` on sampled pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObedienceReport {
    /// `sup |f(x) − f(y)| / ω(|x − y|)` over the examined pairs.
    pub ratio: f64,
    /// Physical coordinates of the maximizing pair.
    pub witness: Option<((f64, f64), (f64, f64))>,
    pub distance: f64,
    pub obeyed: bool,
    /// Set when the pair set was sampled rather than exhaustive.
    pub under_sampled: bool,
    pub pairs: u64,
}

pub fn obeys(field: &ScalarField2D, moc: &Moc, plan: &PairPlan) -> ObedienceReport {
    let g = field.grid();
    let m = max_pair_ratio(field, |d| moc.value(d), plan);
    ObedienceReport {
        ratio: m.ratio,
        witness: m
            .witness
            .map(|(p, q)| (g.coords(p.0, p.1), g.coords(q.0, q.1))),
        distance: m.distance,
        obeyed: m.ratio < 1.0,
        under_sampled: !m.exhaustive,
        pairs: m.pairs,
    }
}

/// Sample `f` on the grid nodes and test obedience.
pub fn obeys_fn(f: impl Fn(f64, f64) -> f64, grid: &Grid2D, moc: &Moc, plan: &PairPlan) -> ObedienceReport {
    obeys(&ScalarField2D::from_fn(grid, f), moc, plan)
}
