use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functionals::{omega1_unchecked, upsilon_unchecked};
use super::{log_grid, Certificate, CriterionConstants, GridSpec, MarginRow, Verdict, SCHEMA_VERSION};
use crate::error::{domain, Error, Result};
use crate::moc::{Moc, Piece, Side};

/// Log grid `[lo_factor, hi_factor]·δ`, denser within a decade of `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SubcriticalGrid {
    pub lo_factor: f64,
    pub hi_factor: f64,
    pub per_decade: usize,
    pub dense_per_decade: usize,
}

impl Default for SubcriticalGrid {
    fn default() -> Self {
        SubcriticalGrid {
            lo_factor: 1e-8,
            hi_factor: 1e8,
            per_decade: 250,
            dense_per_decade: 400,
        }
    }
}

const MIN_PER_DECADE: usize = 20;

/// Sufficient smallness conditions on `δ` and `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubcriticalThresholds {
    /// `(3να(1−α)c_β / (16c_α))^{1/(β−α−1/2)}`, before the `1/9` cap.
    pub delta_case1: f64,
    /// `min{delta_case1, 1/9}`
    pub delta: f64,
    /// `να(1−α)c_β δ^α / (2c_α)` at the given `δ`.
    pub gamma_case2: f64,
    /// `min{δ, gamma_case2}`
    pub gamma: f64,
}

pub fn subcritical_thresholds(c: &CriterionConstants, delta: f64) -> Result<SubcriticalThresholds> {
    c.validate()?;
    if c.beta <= c.alpha + 1.0 {
        return Err(Error::Scope(format!(
            "β = {} ≤ α + 1 = {}; the explicit modulus needs the subcritical range",
            c.beta,
            c.alpha + 1.0
        )));
    }
    let k = c.nu * c.alpha * (1.0 - c.alpha) * c.c_beta / c.c_alpha;
    let delta_case1 = (3.0 * k / 16.0).powf(1.0 / (c.beta - c.alpha - 0.5));
    let gamma_case2 = k * delta.powf(c.alpha) / 2.0;
    Ok(SubcriticalThresholds {
        delta_case1,
        delta: delta_case1.min(1.0 / 9.0),
        gamma_case2,
        gamma: delta.min(gamma_case2),
    })
}

fn first_break(moc: &Moc) -> Result<f64> {
    moc.breakpoints()
        .first()
        .copied()
        .ok_or_else(|| Error::Domain("modulus has no breakpoint to anchor the grid".into()))
}

/// Check `Ω₁(ξ)ω′(ξ) + νΥ_β(ξ) (+ 2εω″(ξ)) < 0` on a log grid around the
/// modulus' first breakpoint `δ`. PASS iff every margin plus its quadrature
/// error is negative. A modulus that is not concave is a FAIL with the reason
/// recorded; its margins are still evaluated so a witness can be reported.
pub fn certify_subcritical(moc: &Moc, c: &CriterionConstants, grid: &SubcriticalGrid) -> Result<Certificate> {
    let delta = first_break(moc)?;
    let th = subcritical_thresholds(c, delta)?;
    if grid.per_decade < MIN_PER_DECADE || grid.dense_per_decade < MIN_PER_DECADE {
        return domain(format!(
            "grid too coarse: at least {MIN_PER_DECADE} points per decade are needed to resolve the breakpoints"
        ));
    }
    if !(grid.lo_factor > 0.0 && grid.hi_factor > grid.lo_factor) {
        return domain("grid factors must satisfy 0 < lo_factor < hi_factor");
    }
    if c.beta >= 2.0 {
        return domain("β = 2 is outside the range of the dissipation integrals");
    }

    let mut xs = log_grid(grid.lo_factor * delta, grid.hi_factor * delta, grid.per_decade);
    xs.extend(log_grid(delta / 10.0, delta * 10.0, grid.dense_per_decade));
    let mut inserted = Vec::new();
    for b in moc.breakpoints() {
        for p in [b * (1.0 - 4.0 * f64::EPSILON), b * (1.0 + 4.0 * f64::EPSILON)] {
            inserted.push(p);
            xs.push(p);
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    // exactly on a slope jump the dissipation is −∞; sample beside it instead
    let bps = moc.breakpoints();
    xs.retain(|x| !bps.contains(x));

    let rows: Vec<Result<MarginRow>> = xs
        .par_iter()
        .map(|&xi| margin_at(moc, c, xi))
        .collect();
    let rows: Vec<MarginRow> = rows.into_iter().collect::<Result<_>>()?;

    let mut worst = rows[0];
    let mut max_err: f64 = 0.0;
    for r in &rows {
        if r.margin + r.error > worst.margin + worst.error {
            worst = *r;
        }
        max_err = max_err.max(r.error);
    }
    let concave = moc.check_concave();
    let positive = worst.margin + worst.error >= 0.0;
    let verdict = if positive || concave.is_err() {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    let reason = match (&concave, positive) {
        (Err(e), _) => Some(format!("{e}; the dissipation bound has no sign")),
        (Ok(()), true) => Some(format!(
            "margin {:e} ≥ 0 at ξ = {:e}",
            worst.margin, worst.xi
        )),
        _ => None,
    };

    let gamma = match moc.pieces().get(1) {
        Some(Piece::SlowTail { gamma, .. }) => Some(*gamma),
        _ => None,
    };
    let mut thresholds = BTreeMap::new();
    thresholds.insert("delta_threshold".into(), th.delta);
    thresholds.insert("delta_case1".into(), th.delta_case1);
    thresholds.insert("gamma_threshold".into(), th.gamma);
    thresholds.insert("gamma_case2".into(), th.gamma_case2);
    thresholds.insert("delta".into(), delta);
    if let Some(g) = gamma {
        thresholds.insert("gamma".into(), g);
    }

    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        config_hash: None,
        criterion: "subcritical".into(),
        verdict,
        reason,
        grid: GridSpec {
            xi_min: xs[0],
            xi_max: *xs.last().expect("non-empty grid"),
            points: xs.len(),
            description: format!(
                "log grid [{:e}, {:e}]·δ at {} per decade, {} per decade on [δ/10, 10δ]",
                grid.lo_factor, grid.hi_factor, grid.per_decade, grid.dense_per_decade
            ),
            inserted,
        },
        worst_margin: worst.margin,
        witness_xi: worst.xi,
        witness_xi0: None,
        tail_margin: rows.last().map(|r| r.margin),
        max_quadrature_error: max_err,
        thresholds,
        inequalities: Vec::new(),
        constants: *c,
        moc: Some(moc.label().to_string()),
        scope: "grid-certified: strict negativity verified at the sampled points only".into(),
        margins: rows,
    })
}

fn margin_at(moc: &Moc, c: &CriterionConstants, xi: f64) -> Result<MarginRow> {
    let w1 = omega1_unchecked(moc, xi, c.alpha)?.scale(c.c_alpha);
    let ups = upsilon_unchecked(moc, xi, c.beta)?.scale(c.c_beta * c.nu);
    let slope = moc.slope(xi, Side::Left).max(moc.slope(xi, Side::Right));
    let drift = w1.value * slope;
    let visc = 2.0 * c.epsilon * moc.curvature(xi);
    Ok(MarginRow {
        xi,
        xi0: None,
        drift,
        dissipation: ups.value + visc,
        margin: drift + ups.value + visc,
        error: w1.error * slope + ups.error,
    })
}
