//! Coefficient checks for the shrinking-head Hölder family.
//!
//! With `C₁ = H/δ^{α+1−β}` and `ξ₀` the head length, the breakdown inequality
//! is split by regime. On `]0, ξ₀]` three inequalities must hold (all
//! prefactors divided out):
//!
//! ```text
//! time derivative vs dissipation:  γC₂ − (νc′/2)(ξ₀/ξ)^β                          < 0
//! drift vs dissipation:            AγC₁(ξ₀/δ)^{γ+β−α−1}(ξ/ξ₀)^{β−α} − (ν/2)c′(1−γ) < 0
//! transverse dissipation:          AγC₁(ξ₀/δ)^{γ+β−α−1}(ξ/ξ₀)^{β−α} − ν            ≤ 0
//! ```
//!
//! On `]ξ₀, δ]` the stationary pair `C₁(ξ/δ)^{γ+β−1−α} − νc′(1−γ)/A < 0` and
//! `AγC₁(ξ/δ)^{γ+β−α−1} − ν ≤ 0` apply, and beyond `δ` the modulus is flat
//! so only the (negative) dissipation remains; it is evaluated by quadrature.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functionals::upsilon_unchecked;
use super::{
    log_grid, Certificate, CriterionConstants, GridSpec, InequalityReport, MarginRow, Verdict,
    SCHEMA_VERSION,
};
use crate::error::{domain, Error, Result};
use crate::moc::Moc;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventualParams {
    pub h: f64,
    pub delta: f64,
    pub gamma: f64,
    /// Shrink rate of the head length.
    pub c2: f64,
}

impl EventualParams {
    /// `H/δ^{α+1−β}`
    pub fn c1(&self, c: &CriterionConstants) -> f64 {
        self.h / self.delta.powf(c.alpha + 1.0 - c.beta)
    }

    /// Parameters with a prescribed `C₁`, i.e. `H = C₁ δ^{α+1−β}`.
    pub fn from_c1(c1: f64, c2: f64, delta: f64, gamma: f64, c: &CriterionConstants) -> Self {
        EventualParams {
            h: c1 * delta.powf(c.alpha + 1.0 - c.beta),
            delta,
            gamma,
            c2,
        }
    }
}

/// `ξ` × `ξ₀` sampling; `ξ₀` runs over `[xi0_min_factor·δ, δ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EventualGrid {
    pub xi_points: usize,
    pub xi0_points: usize,
    pub xi0_min_factor: f64,
    /// `ξ` spans `[xi_lo_factor·ξ₀,min·δ, xi_hi_factor·δ]`.
    pub xi_lo_factor: f64,
    pub xi_hi_factor: f64,
}

impl Default for EventualGrid {
    fn default() -> Self {
        EventualGrid {
            xi_points: 200,
            xi0_points: 50,
            xi0_min_factor: 1e-4,
            xi_lo_factor: 1e-3,
            xi_hi_factor: 1e3,
        }
    }
}

/// Closed-form smallness bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventualBounds {
    /// `c′ν/(2γ)`
    pub c2: f64,
    /// `min{νc′(1−γ)/(2Aγ), ν/(Aγ)}`
    pub c1: f64,
    /// `min{νc′(1−γ)/A, ν/(Aγ)}` for the stationary profile.
    pub c1_stationary: f64,
}

pub fn eventual_bounds(c: &CriterionConstants, gamma: f64) -> EventualBounds {
    let (nu, cp, a, g) = (c.nu, c.c_beta_prime, c.a, gamma);
    EventualBounds {
        c2: cp * nu / (2.0 * g),
        c1: (nu * cp * (1.0 - g) / (2.0 * a * g)).min(nu / (a * g)),
        c1_stationary: (nu * cp * (1.0 - g) / a).min(nu / (a * g)),
    }
}

fn check_scope(p: &EventualParams, c: &CriterionConstants) -> Result<()> {
    c.validate()?;
    let (a, b, g) = (c.alpha, c.beta, p.gamma);
    if !(b > 2.0 * a && b <= a + 1.0) {
        return Err(Error::Scope(format!(
            "need 2α < β ≤ α + 1, got α = {a}, β = {b}"
        )));
    }
    let floor = (a + 1.0 - b).max(a / 2.0);
    if !(g > floor && g < 1.0) {
        return Err(Error::Scope(format!(
            "need max{{α+1−β, α/2}} = {floor} < γ < 1, got γ = {g}"
        )));
    }
    if !(p.h > 0.0 && p.delta > 0.0 && p.c2 > 0.0) {
        return Err(Error::Scope(format!(
            "need H, δ, C₂ > 0, got {}, {}, {}",
            p.h, p.delta, p.c2
        )));
    }
    Ok(())
}

const INEQS: [(&str, bool); 6] = [
    ("head: time derivative vs dissipation", false),
    ("head: drift vs dissipation", false),
    ("head: transverse coefficient", true),
    ("power range: drift vs dissipation", false),
    ("power range: transverse coefficient", true),
    ("flat range: dissipation", false),
];

pub fn certify_eventual(p: &EventualParams, c: &CriterionConstants, grid: &EventualGrid) -> Result<Certificate> {
    check_scope(p, c)?;
    if grid.xi_points < 10 || grid.xi0_points < 2 {
        return domain("eventual grid needs at least 10 ξ and 2 ξ₀ points");
    }
    if !(grid.xi0_min_factor > 0.0 && grid.xi0_min_factor <= 1.0) {
        return domain("xi0_min_factor must lie in ]0, 1]");
    }
    let (alpha, beta, g, d) = (c.alpha, c.beta, p.gamma, p.delta);
    let c1 = p.c1(c);
    let xi0s: Vec<f64> = {
        let lo = grid.xi0_min_factor * d;
        let n = grid.xi0_points;
        (0..n)
            .map(|k| lo * (d / lo).powf(k as f64 / (n - 1) as f64))
            .collect()
    };
    let xi_lo = grid.xi_lo_factor * xi0s[0];
    let xi_hi = grid.xi_hi_factor * d;
    let per_decade = (grid.xi_points as f64 / (xi_hi / xi_lo).log10()).ceil() as usize;
    let mut base = log_grid(xi_lo, xi_hi, per_decade.max(1));
    base.truncate(grid.xi_points.max(2));
    *base.last_mut().expect("non-empty") = xi_hi;
    base.push(d);

    let cp = c.c_beta_prime;
    let nu = c.nu;
    let pieces: Vec<Result<Vec<(usize, MarginRow)>>> = xi0s
        .par_iter()
        .map(|&x0| {
            let mut xs = base.clone();
            xs.push(x0);
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let moc = Moc::eventual(p.h, d, g, x0)?;
            let mut out = Vec::new();
            for &xi in &xs {
                if xi <= x0 {
                    let growth = a_coef(c, g, c1) * (x0 / d).powf(g + beta - alpha - 1.0)
                        * (xi / x0).powf(beta - alpha);
                    let time = nu * cp / 2.0 * (x0 / xi).powf(beta);
                    out.push((0, row(xi, x0, g * p.c2, time)));
                    out.push((1, row(xi, x0, growth, nu / 2.0 * cp * (1.0 - g))));
                    out.push((2, row(xi, x0, growth, nu)));
                } else if xi <= d {
                    let r = (xi / d).powf(g + beta - 1.0 - alpha);
                    out.push((3, row(xi, x0, c1 * r, nu * cp * (1.0 - g) / c.a)));
                    out.push((4, row(xi, x0, a_coef(c, g, c1) * r, nu)));
                } else {
                    let u = upsilon_unchecked(&moc, xi, beta)?.scale(nu * c.c_beta);
                    // normalized by the flat value H ξ^{−β}
                    let norm = p.h * xi.powf(-beta);
                    out.push((
                        5,
                        MarginRow {
                            xi,
                            xi0: Some(x0),
                            drift: 0.0,
                            dissipation: u.value / norm,
                            margin: u.value / norm,
                            error: u.error / norm,
                        },
                    ));
                }
            }
            Ok(out)
        })
        .collect();

    let mut per_ineq: Vec<Vec<MarginRow>> = vec![Vec::new(); INEQS.len()];
    for chunk in pieces {
        for (k, r) in chunk? {
            per_ineq[k].push(r);
        }
    }

    let mut reports = Vec::new();
    let mut all_rows = Vec::new();
    let mut overall: Option<(f64, MarginRow)> = None;
    let mut max_err: f64 = 0.0;
    for ((name, non_strict), rows) in INEQS.iter().zip(&per_ineq) {
        if rows.is_empty() {
            continue;
        }
        let mut worst = rows[0];
        for r in rows {
            if r.margin + r.error > worst.margin + worst.error {
                worst = *r;
            }
            max_err = max_err.max(r.error);
        }
        let bad = if *non_strict {
            worst.margin + worst.error > 0.0
        } else {
            worst.margin + worst.error >= 0.0
        };
        reports.push(InequalityReport {
            name: name.to_string(),
            verdict: if bad { Verdict::Fail } else { Verdict::Pass },
            non_strict: *non_strict,
            worst_margin: worst.margin,
            witness_xi: worst.xi,
            witness_xi0: worst.xi0,
        });
        // the overall witness is the first failing inequality, else the largest margin
        let key = if bad { f64::INFINITY } else { worst.margin };
        if overall.is_none_or(|(k, _)| key > k) {
            overall = Some((key, worst));
        }
        all_rows.extend_from_slice(rows);
    }
    let failed: Vec<&InequalityReport> = reports.iter().filter(|r| r.verdict == Verdict::Fail).collect();
    let verdict = if failed.is_empty() { Verdict::Pass } else { Verdict::Fail };
    let reason = (!failed.is_empty()).then(|| {
        failed
            .iter()
            .map(|r| format!("{} (margin {:e} at ξ = {:e})", r.name, r.worst_margin, r.witness_xi))
            .collect::<Vec<_>>()
            .join("; ")
    });
    let (_, worst) = overall.expect("at least one inequality sampled");

    let b = eventual_bounds(c, g);
    let mut thresholds = BTreeMap::new();
    thresholds.insert("C1".into(), c1);
    thresholds.insert("C2".into(), p.c2);
    thresholds.insert("C1_bound".into(), b.c1);
    thresholds.insert("C1_bound_stationary".into(), b.c1_stationary);
    thresholds.insert("C2_bound".into(), b.c2);
    thresholds.insert("vanish_time".into(), d.powf(beta) / (p.c2 * beta));

    let mut inserted = xi0s.clone();
    inserted.push(d);
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        config_hash: None,
        criterion: "eventual".into(),
        verdict,
        reason,
        grid: GridSpec {
            xi_min: xi_lo,
            xi_max: xi_hi,
            points: base.len() * xi0s.len(),
            description: format!(
                "{} log ξ points on [{xi_lo:e}, {xi_hi:e}] × {} log ξ₀ points on [{:e}, {d:e}], each ξ₀ and δ inserted",
                base.len() - 1,
                xi0s.len(),
                xi0s[0]
            ),
            inserted,
        },
        worst_margin: worst.margin,
        witness_xi: worst.xi,
        witness_xi0: worst.xi0,
        tail_margin: per_ineq[5].last().map(|r| r.margin),
        max_quadrature_error: max_err,
        thresholds,
        inequalities: reports,
        constants: *c,
        moc: Some("eventual".into()),
        scope: "grid-certified: bounding expressions sampled on the (ξ, ξ₀) grid only".into(),
        margins: all_rows,
    })
}

fn a_coef(c: &CriterionConstants, gamma: f64, c1: f64) -> f64 {
    c.a * gamma * c1
}

fn row(xi: f64, xi0: f64, drift: f64, dissipation: f64) -> MarginRow {
    MarginRow {
        xi,
        xi0: Some(xi0),
        drift,
        dissipation: -dissipation,
        margin: drift - dissipation,
        error: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts() -> CriterionConstants {
        CriterionConstants::new(0.3, 0.9, 1.0)
    }

    #[test]
    fn bound_values() {
        let b = eventual_bounds(&consts(), 0.8);
        assert!((b.c2 - 0.625).abs() < 1e-15);
        assert!((b.c1 - 0.125).abs() < 1e-15);
    }

    #[test]
    fn transverse_condition_at_the_corner() {
        // at ξ = ξ₀ = δ the coefficient condition reads ν ≥ AγC₁
        let c = consts();
        let g = 0.8;
        let c1 = 1.0;
        let p = EventualParams::from_c1(c1, 0.1, 0.5, g, &c);
        let cert = certify_eventual(&p, &c, &EventualGrid::default()).unwrap();
        let tr = cert
            .inequalities
            .iter()
            .find(|r| r.name == "head: transverse coefficient")
            .unwrap();
        assert!((tr.worst_margin - (c.a * g * c1 - c.nu)).abs() < 1e-12);
        assert!((tr.witness_xi - 0.5).abs() < 1e-12);
        assert_eq!(tr.witness_xi0, Some(0.5));
    }

    #[test]
    fn scope_checks() {
        let c = CriterionConstants::new(0.3, 1.6, 1.0);
        let p = EventualParams { h: 1.0, delta: 0.1, gamma: 0.8, c2: 0.1 };
        assert!(matches!(certify_eventual(&p, &c, &EventualGrid::default()), Err(Error::Scope(_))));
        let c = consts();
        let p = EventualParams { gamma: 0.3, ..p };
        assert!(matches!(certify_eventual(&p, &c, &EventualGrid::default()), Err(Error::Scope(_))));
    }
}
