//! Run configuration: one TOML file, overridable from the command line.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::certify::{CriterionConstants, EventualGrid, SubcriticalGrid};
use crate::error::{Error, Result};
use crate::evolution::{InitialData, Scheme, SolverParams};
use crate::moc::MocFamily;
use crate::pairs::PairPlan;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "GSQG_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Simulate,
    Certify,
    Ladder,
    Diagnose,
    DecayFit,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Simulate => "simulate",
            Mode::Certify => "certify",
            Mode::Ladder => "ladder",
            Mode::Diagnose => "diagnose",
            Mode::DecayFit => "decay-fit",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    #[default]
    Subcritical,
    Eventual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl Regime {
    /// `β > α + 1`, `β = α + 1` or `β < α + 1`.
    pub fn classify(alpha: f64, beta: f64) -> Regime {
        let d = beta - (alpha + 1.0);
        if d.abs() <= 1e-12 {
            Regime::Critical
        } else if d > 0.0 {
            Regime::Subcritical
        } else {
            Regime::Supercritical
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        })
    }
}

/// Grid and time-stepping numerics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub n: usize,
    pub length: f64,
    pub dt: f64,
    pub t_end: f64,
    pub cfl_safety: f64,
    pub dealias_fraction: f64,
    pub truncation_modes: Option<f64>,
    pub scheme: Scheme,
    pub force: bool,
    pub grad_ceiling: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let p = SolverParams::default();
        SolverConfig {
            n: 64,
            length: 2.0 * PI,
            dt: p.dt,
            t_end: p.t_end,
            cfl_safety: p.cfl_safety,
            dealias_fraction: p.dealias_fraction,
            truncation_modes: p.truncation_modes,
            scheme: p.scheme,
            force: p.force,
            grad_ceiling: p.grad_ceiling,
        }
    }
}

/// The unspecified constants of the criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstantsConfig {
    pub c_alpha: f64,
    pub c_beta: f64,
    pub c_beta_prime: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig {
            c_alpha: 1.0,
            c_beta: 1.0,
            c_beta_prime: 1.0,
            a: 1.0,
        }
    }
}

/// A threshold-relative or explicit value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Value(f64),
    Keyword(Keyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Keyword {
    /// Half the closed-form threshold.
    HalfThreshold,
}

impl std::str::FromStr for ParamValue {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "half-threshold" | "half-bound" => Ok(ParamValue::Keyword(Keyword::HalfThreshold)),
            _ => s
                .parse::<f64>()
                .map(ParamValue::Value)
                .map_err(|_| format!("expected a number or `half-threshold`, got `{s}`")),
        }
    }
}

impl ParamValue {
    pub fn resolve(self, threshold: f64) -> f64 {
        match self {
            ParamValue::Value(v) => v,
            ParamValue::Keyword(Keyword::HalfThreshold) => 0.5 * threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifyConfig {
    pub criterion: Criterion,
    /// `δ`: breakpoint of the explicit modulus, or of the Hölder profile.
    pub delta: ParamValue,
    /// `γ`: tail rate of the explicit modulus, or the Hölder exponent.
    pub gamma: ParamValue,
    pub subcritical_grid: SubcriticalGrid,
    /// Eventual: `C₁ = H/δ^{α+1−β}` and the head shrink rate `C₂`.
    pub c1: ParamValue,
    pub c2: ParamValue,
    pub eventual_grid: EventualGrid,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            criterion: Criterion::Subcritical,
            delta: ParamValue::Keyword(Keyword::HalfThreshold),
            gamma: ParamValue::Keyword(Keyword::HalfThreshold),
            subcritical_grid: SubcriticalGrid::default(),
            c1: ParamValue::Keyword(Keyword::HalfThreshold),
            c2: ParamValue::Keyword(Keyword::HalfThreshold),
            eventual_grid: EventualGrid::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LadderConfig {
    pub sigma1: f64,
    pub p: f64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig { sigma1: 0.4, p: 40.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingConfig {
    /// Time between records.
    pub interval: f64,
    pub holder_gamma: Option<f64>,
    /// Track obedience of the configured `[moc]`.
    pub obedience: bool,
    /// Fit the `L^∞` decay constant on samples up to this time.
    pub decay_fit_time: Option<f64>,
    pub json_lines: bool,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            interval: 0.01,
            holder_gamma: None,
            obedience: false,
            decay_fit_time: None,
            json_lines: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnoseConfig {
    /// Checkpoint to read; the configured initial data is used otherwise.
    pub input: Option<PathBuf>,
    pub holder_gamma: Vec<f64>,
    pub besov_s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayFitConfig {
    /// Series CSV written by `simulate`.
    pub input: Option<PathBuf>,
    pub t_fit: f64,
}

impl Default for DecayFitConfig {
    fn default() -> Self {
        DecayFitConfig {
            input: None,
            t_fit: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub epsilon: f64,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub solver: SolverConfig,
    pub initial: InitialData,
    pub moc: Option<MocFamily>,
    pub constants: ConstantsConfig,
    pub certify: CertifyConfig,
    pub ladder: LadderConfig,
    pub sampling: SamplingConfig,
    pub diagnose: DiagnoseConfig,
    pub decay_fit: DecayFitConfig,
    pub pairs: PairPlan,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: None,
            alpha: 0.3,
            beta: 1.6,
            nu: 1.0,
            epsilon: 0.0,
            threads: None,
            out_dir: None,
            solver: SolverConfig::default(),
            initial: InitialData::RandomSmooth {
                seed: 0,
                spectrum_decay: 3.0,
                amplitude: 1.0,
            },
            moc: None,
            constants: ConstantsConfig::default(),
            certify: CertifyConfig::default(),
            ladder: LadderConfig::default(),
            sampling: SamplingConfig::default(),
            diagnose: DiagnoseConfig::default(),
            decay_fit: DecayFitConfig::default(),
            pairs: PairPlan::default(),
        }
    }
}

/// Either the regime label or the list of violated constraints, never both.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Validation {
    Valid { regime: Regime },
    Invalid { violations: Vec<String> },
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialized configuration.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn regime(&self) -> Regime {
        Regime::classify(self.alpha, self.beta)
    }

    pub fn solver_params(&self) -> SolverParams {
        let s = &self.solver;
        SolverParams {
            alpha: self.alpha,
            beta: self.beta,
            nu: self.nu,
            epsilon: self.epsilon,
            dt: s.dt,
            t_end: s.t_end,
            cfl_safety: s.cfl_safety,
            dealias_fraction: s.dealias_fraction,
            truncation_modes: s.truncation_modes,
            scheme: s.scheme,
            force: s.force,
            grad_ceiling: s.grad_ceiling,
        }
    }

    pub fn criterion_constants(&self) -> CriterionConstants {
        let k = &self.constants;
        CriterionConstants {
            c_alpha: k.c_alpha,
            c_beta: k.c_beta,
            c_beta_prime: k.c_beta_prime,
            a: k.a,
            nu: self.nu,
            alpha: self.alpha,
            beta: self.beta,
            epsilon: self.epsilon,
        }
    }

    /// Check every parameter domain for `mode` before any computation.
    pub fn validate(&self, mode: Mode) -> Validation {
        let mut v = Vec::new();
        let (a, b) = (self.alpha, self.beta);
        if let Some(m) = self.mode {
            if m != mode {
                v.push(format!("config declares mode `{m}` but `{mode}` was requested"));
            }
        }
        if !(a > 0.0 && a < 1.0) {
            v.push(format!("alpha ∈ ]0, 1[ violated: alpha = {a}"));
        }
        if !(b > 0.0 && b <= 2.0) {
            v.push(format!("beta ∈ ]0, 2] violated: beta = {b}"));
        }
        if !(self.nu >= 0.0) {
            v.push(format!("nu ≥ 0 violated: nu = {}", self.nu));
        }
        if !(self.epsilon >= 0.0) {
            v.push(format!("epsilon ≥ 0 violated: epsilon = {}", self.epsilon));
        }
        if self.threads == Some(0) {
            v.push("threads ≥ 1 violated".into());
        }
        if let Some(MocFamily::Tabulated { path }) = &self.moc {
            if !path.exists() {
                v.push(format!("moc table {} does not exist", path.display()));
            }
        }
        match mode {
            Mode::Simulate => {
                if let Err(e) = self.solver_params().validate() {
                    v.push(e.to_string());
                }
                if !(self.solver.n >= 8 && self.solver.n.is_power_of_two()) {
                    v.push(format!("grid n = {} must be a power of two ≥ 8", self.solver.n));
                }
                if !(self.sampling.interval > 0.0) {
                    v.push("sampling interval must be positive".into());
                }
                if self.sampling.obedience && self.moc.is_none() {
                    v.push("obedience tracking needs a [moc] block".into());
                }
            }
            Mode::Certify => {
                if self.nu <= 0.0 {
                    v.push("certification needs nu > 0".into());
                }
                if let Err(e) = self.criterion_constants().validate() {
                    v.push(e.to_string());
                }
                match self.certify.criterion {
                    Criterion::Subcritical => {
                        if !(b > a + 1.0) {
                            v.push(format!(
                                "β > α + 1 violated for subcritical certification: β = {b}, α + 1 = {}",
                                a + 1.0
                            ));
                        }
                        if b >= 2.0 {
                            v.push("β < 2 violated: the dissipation integrals are not defined at β = 2".into());
                        }
                    }
                    Criterion::Eventual => {
                        for (name, val) in [("delta", self.certify.delta), ("gamma", self.certify.gamma)] {
                            if !matches!(val, ParamValue::Value(_)) {
                                v.push(format!("eventual certification needs an explicit {name}"));
                            }
                        }
                        if !(b > 2.0 * a) {
                            v.push(format!(
                                "β > 2α violated for eventual certification: β = {b}, 2α = {}",
                                2.0 * a
                            ));
                        }
                        if !(b <= a + 1.0) {
                            v.push(format!(
                                "β ≤ α + 1 violated for eventual certification: β = {b}, α + 1 = {}",
                                a + 1.0
                            ));
                        }
                    }
                }
            }
            Mode::Ladder => {
                let s0 = (a + 1.0 - b).max(a / 2.0);
                if !(self.ladder.sigma1 > s0 && self.ladder.sigma1 < 1.0) {
                    v.push(format!(
                        "σ₁ ∈ ]max{{α+1−β, α/2}}, 1[ = ]{s0}, 1[ violated: σ₁ = {}",
                        self.ladder.sigma1
                    ));
                }
                if !(self.ladder.p >= 1.0) {
                    v.push(format!("p ≥ 1 violated: p = {}", self.ladder.p));
                }
            }
            Mode::Diagnose => {
                if let Some(p) = &self.diagnose.input {
                    if !p.exists() {
                        v.push(format!("input checkpoint {} does not exist", p.display()));
                    }
                }
                for &g in &self.diagnose.holder_gamma {
                    if !(g > 0.0 && g < 1.0) {
                        v.push(format!("holder gamma ∈ ]0, 1[ violated: {g}"));
                    }
                }
            }
            Mode::DecayFit => {
                match &self.decay_fit.input {
                    Some(p) if !p.exists() => {
                        v.push(format!("input series {} does not exist", p.display()))
                    }
                    None => v.push("decay-fit needs an input series".into()),
                    _ => {}
                }
                if !(self.decay_fit.t_fit > 0.0) {
                    v.push("t_fit must be positive".into());
                }
            }
        }
        if v.is_empty() {
            Validation::Valid {
                regime: self.regime(),
            }
        } else {
            Validation::Invalid { violations: v }
        }
    }

    /// `--out`, then the config's `out_dir`, then `$GSQG_OUT_DIR`, then `./gsqg-out`.
    pub fn output_dir(&self, cli: Option<&Path>) -> PathBuf {
        if let Some(p) = cli {
            return p.to_path_buf();
        }
        if let Some(p) = &self.out_dir {
            return p.clone();
        }
        match std::env::var_os(OUT_DIR_ENV) {
            Some(p) if !p.is_empty() => PathBuf::from(p),
            _ => PathBuf::from("gsqg-out"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        assert_eq!(Regime::classify(0.3, 1.6), Regime::Subcritical);
        assert_eq!(Regime::classify(0.5, 1.5), Regime::Critical);
        assert_eq!(Regime::classify(0.2, 0.5), Regime::Supercritical);
    }

    #[test]
    fn eventual_scope_named_constraint() {
        let mut c = RunConfig {
            alpha: 0.5,
            beta: 0.9,
            ..Default::default()
        };
        c.certify.criterion = Criterion::Eventual;
        c.certify.delta = ParamValue::Value(1.0);
        c.certify.gamma = ParamValue::Value(0.8);
        match c.validate(Mode::Certify) {
            Validation::Invalid { violations } => {
                assert!(violations.iter().any(|s| s.contains("β > 2α")))
            }
            other => panic!("{other:?}"),
        }
        c.beta = 1.2;
        assert!(matches!(c.validate(Mode::Certify), Validation::Valid { regime: Regime::Supercritical }));
    }

    #[test]
    fn toml_round_trip_and_hash() {
        let text = r#"
            alpha = 0.3
            beta = 1.6
            [solver]
            n = 32
            dt = 1e-3
            [initial]
            profile = "single_mode"
            k = [3, 4]
            [moc]
            family = "kisel-nv"
            delta = 0.01
            gamma = 0.001
            beta = 1.6
            [certify]
            delta = "half-threshold"
            gamma = 0.002
        "#;
        let c = RunConfig::from_toml(text).unwrap();
        assert_eq!(c.solver.n, 32);
        assert_eq!(c.certify.gamma, ParamValue::Value(0.002));
        let back = RunConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        assert_eq!(c.hash().len(), 64);
        let other = RunConfig { nu: 2.0, ..c.clone() };
        assert_ne!(other.hash(), c.hash());
        assert!(RunConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn output_dir_precedence() {
        let c = RunConfig {
            out_dir: Some("from-config".into()),
            ..Default::default()
        };
        assert_eq!(c.output_dir(Some(Path::new("cli"))), PathBuf::from("cli"));
        assert_eq!(c.output_dir(None), PathBuf::from("from-config"));
    }
}
