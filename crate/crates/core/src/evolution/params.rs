use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Integrating-factor Heun, second order.
    #[default]
    Rk2,
    /// Integrating-factor (Lawson) RK4.
    Rk4,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub epsilon: f64,
    pub dt: f64,
    pub t_end: f64,
    pub cfl_safety: f64,
    /// Fraction of the Nyquist index kept by the dealiasing filter.
    pub dealias_fraction: f64,
    /// Galerkin cutoff `N`: modes with `|k| > N·2π/L` are removed.
    pub truncation_modes: Option<f64>,
    pub scheme: Scheme,
    /// Step through CFL violations instead of refusing.
    pub force: bool,
    /// `‖∇θ‖_∞` above this value is treated as blow-up.
    pub grad_ceiling: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            alpha: 0.3,
            beta: 1.6,
            nu: 1.0,
            epsilon: 0.0,
            dt: 1e-3,
            t_end: 1.0,
            cfl_safety: 0.5,
            dealias_fraction: 2.0 / 3.0,
            truncation_modes: None,
            scheme: Scheme::Rk2,
            force: false,
            grad_ceiling: 1e8,
        }
    }
}

impl SolverParams {
    /// Check parameter domains. Returns advisory warnings on success.
    pub fn validate(&self) -> Result<Vec<String>> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return domain(format!("alpha = {} must lie in ]0, 1[", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta <= 2.0) {
            return domain(format!("beta = {} must lie in ]0, 2]", self.beta));
        }
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return domain(format!("nu = {} must be non-negative", self.nu));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return domain(format!("epsilon = {} must be non-negative", self.epsilon));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return domain(format!("dt = {} must be positive", self.dt));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return domain(format!("t_end = {} must be non-negative", self.t_end));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return domain(format!("cfl_safety = {} must lie in ]0, 1]", self.cfl_safety));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return domain(format!(
                "dealias_fraction = {} must lie in ]0, 1]",
                self.dealias_fraction
            ));
        }
        if let Some(n) = self.truncation_modes {
            if !(n > 0.0) {
                return domain(format!("truncation_modes = {n} must be positive"));
            }
        }
        if !(self.grad_ceiling > 0.0) {
            return domain("grad_ceiling must be positive");
        }
        let mut warnings = Vec::new();
        if self.nu == 0.0 && self.epsilon == 0.0 {
            warnings.push("nu = 0 and epsilon = 0: the run has no dissipation".to_string());
        }
        if self.dealias_fraction > 2.0 / 3.0 + 1e-12 {
            warnings.push(format!(
                "dealias_fraction = {} keeps aliased modes of the quadratic term",
                self.dealias_fraction
            ));
        }
        Ok(warnings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(SolverParams::default().validate().unwrap().is_empty());
    }

    #[test]
    fn inviscid_warns() {
        let p = SolverParams {
            nu: 0.0,
            ..Default::default()
        };
        assert_eq!(p.validate().unwrap().len(), 1);
    }

    #[test]
    fn rejects_bad_domains() {
        for p in [
            SolverParams { dt: 0.0, ..Default::default() },
            SolverParams { alpha: 1.0, ..Default::default() },
            SolverParams { beta: 2.5, ..Default::default() },
            SolverParams { dealias_fraction: 0.0, ..Default::default() },
            SolverParams { cfl_safety: 1.5, ..Default::default() },
        ] {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }
}
