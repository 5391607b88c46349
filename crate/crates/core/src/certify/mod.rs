//! Grid verification of the breakdown criterion for concrete moduli, the
//! closed-form parameter thresholds, and the regularity exponent ladder.
//!
//! Every verdict is conditional on the supplied absolute constants
//! ([`CriterionConstants`]) and on the sampled `ξ` grid.

mod decay;
mod eventual;
mod functionals;
mod ladder;
mod lambda;
mod subcritical;

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use decay::{decay_bound, fit_decay_constant, DecayFit};
pub use eventual::{certify_eventual, eventual_bounds, EventualBounds, EventualGrid, EventualParams};
pub use functionals::{omega1, upsilon_beta};
pub use ladder::{regularity_ladder, Ladder};
pub use lambda::{default_c0, lambda_for_data, LambdaChoice};
pub use subcritical::{
    certify_subcritical, subcritical_thresholds, SubcriticalGrid, SubcriticalThresholds,
};

pub const SCHEMA_VERSION: u32 = 1;

/// The unspecified absolute constants of the criterion, plus the equation's
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriterionConstants {
    pub c_alpha: f64,
    pub c_beta: f64,
    pub c_beta_prime: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Artificial viscosity; adds `2ε ω″(ξ)` to the margin.
    pub epsilon: f64,
}

impl Default for CriterionConstants {
    fn default() -> Self {
        CriterionConstants {
            c_alpha: 1.0,
            c_beta: 1.0,
            c_beta_prime: 1.0,
            a: 1.0,
            nu: 1.0,
            alpha: 0.3,
            beta: 1.6,
            epsilon: 0.0,
        }
    }
}

impl CriterionConstants {
    pub fn new(alpha: f64, beta: f64, nu: f64) -> Self {
        CriterionConstants {
            alpha,
            beta,
            nu,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c_alpha", self.c_alpha),
            ("c_beta", self.c_beta),
            ("c_beta_prime", self.c_beta_prime),
            ("A", self.a),
            ("nu", self.nu),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return domain(format!("{name} = {v} must be positive"));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return domain(format!("alpha = {} must lie in ]0, 1[", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta <= 2.0) {
            return domain(format!("beta = {} must lie in ]0, 2]", self.beta));
        }
        if !(self.epsilon >= 0.0) {
            return domain(format!("epsilon = {} must be non-negative", self.epsilon));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// How the `ξ` (and `ξ₀`) samples were laid out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub xi_min: f64,
    pub xi_max: f64,
    pub points: usize,
    pub description: String,
    /// Extra points inserted at or around breakpoints.
    pub inserted: Vec<f64>,
}

/// Margin of one sampled inequality at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginRow {
    pub xi: f64,
    pub xi0: Option<f64>,
    /// Positive (drift) contribution.
    pub drift: f64,
    /// Negative (dissipation) contribution.
    pub dissipation: f64,
    pub margin: f64,
    pub error: f64,
}

/// Worst sample of one inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub verdict: Verdict,
    /// `true` if the inequality is non-strict (`≤ 0`).
    pub non_strict: bool,
    pub worst_margin: f64,
    pub witness_xi: f64,
    pub witness_xi0: Option<f64>,
}

/// A reproducible record of one certification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    pub criterion: String,
    pub verdict: Verdict,
    /// Why a FAIL was issued without (or in addition to) a positive margin.
    pub reason: Option<String>,
    pub grid: GridSpec,
    pub worst_margin: f64,
    pub witness_xi: f64,
    pub witness_xi0: Option<f64>,
    /// Margin at the largest sampled `ξ`.
    pub tail_margin: Option<f64>,
    pub max_quadrature_error: f64,
    pub thresholds: BTreeMap<String, f64>,
    pub inequalities: Vec<InequalityReport>,
    pub constants: CriterionConstants,
    pub moc: Option<String>,
    /// Informational: the verdict holds on the sampled grid only.
    pub scope: String,
    #[serde(skip)]
    pub margins: Vec<MarginRow>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// `xi,xi0,drift,dissipation,margin,error` rows.
    pub fn write_margins_csv<W: Write>(&self, mut w: W, header: &str) -> Result<()> {
        writeln!(w, "{header}")?;
        writeln!(w, "xi,xi0,drift,dissipation,margin,error")?;
        for r in &self.margins {
            let xi0 = r.xi0.map(|v| format!("{v:e}")).unwrap_or_default();
            writeln!(
                w,
                "{:e},{},{:e},{:e},{:e},{:e}",
                r.xi, xi0, r.drift, r.dissipation, r.margin, r.error
            )?;
        }
        Ok(())
    }
}

/// Log-spaced samples of `[lo, hi]` with `per_decade` points per decade.
pub(crate) fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).ceil().max(1.0) as usize;
    (0..=n)
        .map(|k| lo * (hi / lo).powf(k as f64 / n as f64))
        .collect()
}
