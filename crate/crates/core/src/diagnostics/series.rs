use std::io::Write;

use serde::Serialize;

use super::seminorms::holder_seminorm;
use crate::certify::{decay_bound, fit_decay_constant, DecayFit};
use crate::error::{domain, Result};
use crate::evolution::SimulationState;
use crate::moc::{obeys, Moc};
use crate::pairs::PairPlan;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 9] = [
    "t",
    "L2",
    "Linf",
    "grad_Linf",
    "holder_seminorm",
    "moc_obedience_ratio",
    "blowup_integral",
    "energy_residual",
    "decay_envelope_ratio",
];

/// One sample of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeSeriesRecord {
    pub t: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
    #[serde(rename = "Linf")]
    pub linf: f64,
    #[serde(rename = "grad_Linf")]
    pub grad_linf: f64,
    pub holder_seminorm: Option<f64>,
    pub moc_obedience_ratio: Option<f64>,
    pub blowup_integral: f64,
    /// `‖θ(t)‖² + ∫₀ᵗ 2(ν‖Λ^{β/2}θ‖² + ε‖∇θ‖²) − ‖θ₀‖²`
    pub energy_residual: f64,
    pub decay_envelope_ratio: Option<f64>,
}

/// Fit the decay constant on samples with `t ≤ t_fit`, then freeze it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayMonitor {
    pub beta: f64,
    pub t_fit: f64,
}

/// Collects records from successive states of one run.
#[derive(Debug, Clone)]
pub struct Tracker {
    plan: PairPlan,
    holder_gamma: Option<f64>,
    moc: Option<Moc>,
    decay: Option<DecayMonitor>,
    initial: Option<(f64, f64)>,
    early: Vec<(f64, f64)>,
    fit: Option<DecayFit>,
}

impl Tracker {
    pub fn new(plan: PairPlan) -> Self {
        Tracker {
            plan,
            holder_gamma: None,
            moc: None,
            decay: None,
            initial: None,
            early: Vec::new(),
            fit: None,
        }
    }

    pub fn with_holder(mut self, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return domain(format!("gamma = {gamma} must lie in ]0, 1["));
        }
        self.holder_gamma = Some(gamma);
        Ok(self)
    }

    pub fn with_moc(mut self, moc: Moc) -> Self {
        self.moc = Some(moc);
        self
    }

    pub fn with_decay(mut self, monitor: DecayMonitor) -> Result<Self> {
        if !(monitor.beta > 0.0 && monitor.t_fit > 0.0) {
            return domain("decay monitor needs beta > 0 and t_fit > 0");
        }
        self.decay = Some(monitor);
        Ok(self)
    }

    /// The frozen decay fit, once `t_fit` has been reached.
    pub fn decay_fit(&self) -> Option<DecayFit> {
        self.fit
    }

    pub fn record(&mut self, s: &SimulationState) -> Result<TimeSeriesRecord> {
        let linf = s.theta.linf_norm();
        let l2 = s.theta.l2_norm();
        let (linf0, l2_0) = *self.initial.get_or_insert((linf, l2));
        let holder_seminorm = match self.holder_gamma {
            Some(g) => Some(holder_seminorm(&s.theta, g, &self.plan)?.value),
            None => None,
        };
        let moc_obedience_ratio = self.moc.as_ref().map(|m| obeys(&s.theta, m, &self.plan).ratio);
        let mut decay_envelope_ratio = None;
        if let Some(dm) = self.decay {
            if self.fit.is_none() {
                if s.t > 0.0 && s.t <= dm.t_fit {
                    self.early.push((s.t, linf));
                }
                if s.t >= dm.t_fit && !self.early.is_empty() {
                    self.fit = Some(fit_decay_constant(linf0, l2_0, dm.beta, &self.early)?);
                }
            }
            if let Some(fit) = self.fit {
                decay_envelope_ratio = Some(linf / decay_bound(linf0, l2_0, dm.beta, fit.c, s.t));
            }
        }
        Ok(TimeSeriesRecord {
            t: s.t,
            l2,
            linf,
            grad_linf: s.grad_linf,
            holder_seminorm,
            moc_obedience_ratio,
            blowup_integral: s.blowup_integral,
            energy_residual: s.energy_residual(),
            decay_envelope_ratio,
        })
    }
}

/// Records for a sequence of states.
pub fn track<'a>(
    states: impl IntoIterator<Item = &'a SimulationState>,
    tracker: &mut Tracker,
) -> Result<Vec<TimeSeriesRecord>> {
    states.into_iter().map(|s| tracker.record(s)).collect()
}

pub fn write_csv_header<W: Write>(mut w: W, config_hash: &str) -> Result<()> {
    writeln!(w, "# schema_version={SCHEMA_VERSION} config_hash={config_hash}")?;
    writeln!(w, "{}", CSV_COLUMNS.join(","))?;
    Ok(())
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_csv_row<W: Write>(mut w: W, r: &TimeSeriesRecord) -> Result<()> {
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{}",
        r.t,
        r.l2,
        r.linf,
        r.grad_linf,
        cell(r.holder_seminorm),
        cell(r.moc_obedience_ratio),
        r.blowup_integral,
        r.energy_residual,
        cell(r.decay_envelope_ratio)
    )?;
    Ok(())
}

/// One JSON object per line, tagged with the schema version.
pub fn write_json_line<W: Write>(mut w: W, r: &TimeSeriesRecord) -> Result<()> {
    #[derive(Serialize)]
    struct Tagged<'a> {
        schema_version: u32,
        #[serde(flatten)]
        record: &'a TimeSeriesRecord,
    }
    let line = serde_json::to_string(&Tagged {
        schema_version: SCHEMA_VERSION,
        record: r,
    })
    .map_err(|e| crate::Error::Format(e.to_string()))?;
    writeln!(w, "{line}")?;
    Ok(())
}
