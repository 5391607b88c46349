use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::moc::{obeys, Moc, ObedienceReport};
use crate::pairs::PairPlan;
use crate::spectral::ScalarField2D;

/// The default level `c₀ = ω(δ) = δ − δ^{3/2}` below the supremum.
pub fn default_c0(delta: f64) -> f64 {
    delta - delta * delta.sqrt()
}

/// Dilation making the scaled modulus admissible for given data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaChoice {
    pub lambda: f64,
    /// `ω^{-1}(2‖θ₀‖_∞/λ^{β−α−1})`
    pub delta0: f64,
    /// `(4‖θ₀‖_∞/c₀)^{1/(β−α−1)}`
    pub amplitude_branch: f64,
    /// `ω^{-1}(c₀)‖∇θ₀‖_∞/‖θ₀‖_∞`
    pub gradient_branch: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl LambdaChoice {
    pub fn scaled(&self, moc: &Moc) -> Result<Moc> {
        moc.scale(self.lambda, self.alpha, self.beta)
    }

    /// Re-check obedience of the scaled modulus on a concrete field.
    pub fn verify(&self, moc: &Moc, field: &ScalarField2D, plan: &PairPlan) -> Result<ObedienceReport> {
        Ok(obeys(field, &self.scaled(moc)?, plan))
    }
}

pub fn lambda_for_data(
    theta0_linf: f64,
    grad_linf: f64,
    c0: f64,
    moc: &Moc,
    alpha: f64,
    beta: f64,
) -> Result<LambdaChoice> {
    let e = beta - alpha - 1.0;
    if !(e > 0.0) {
        return Err(Error::Scope(format!(
            "β − α − 1 = {e} must be positive for the dilation argument"
        )));
    }
    if !(theta0_linf > 0.0 && grad_linf >= 0.0) {
        return domain("need ‖θ₀‖_∞ > 0 and ‖∇θ₀‖_∞ ≥ 0");
    }
    if !(c0 > 0.0 && c0 < moc.sup()) {
        return domain(format!("c0 = {c0} must lie in ]0, sup ω = {}[", moc.sup()));
    }
    let amplitude_branch = (4.0 * theta0_linf / c0).powf(1.0 / e);
    let gradient_branch = moc.inverse(c0)? * grad_linf / theta0_linf;
    let lambda = amplitude_branch.max(gradient_branch);
    let delta0 = moc.inverse(2.0 * theta0_linf / lambda.powf(e))?;
    Ok(LambdaChoice {
        lambda,
        delta0,
        amplitude_branch,
        gradient_branch,
        alpha,
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitude_branch_equal_to_one() {
        let m = Moc::kisel_nv(0.01, 0.001, 1.6).unwrap();
        let c0 = default_c0(0.01);
        let l = lambda_for_data(c0 / 4.0, 1e-6, c0, &m, 0.3, 1.6).unwrap();
        assert!((l.lambda - 1.0).abs() < 1e-14);
    }

    #[test]
    fn monotone_in_gradient() {
        let m = Moc::kisel_nv(0.01, 0.001, 1.6).unwrap();
        let c0 = default_c0(0.01);
        let mut prev = 0.0;
        for g in [0.1, 1.0, 2.0, 4.0, 100.0] {
            let l = lambda_for_data(1.0, g, c0, &m, 0.3, 1.6).unwrap().lambda;
            assert!(l >= prev);
            prev = l;
        }
        assert!(lambda_for_data(1.0, 1.0, m.sup(), &m, 0.3, 1.6).is_err());
        assert!(lambda_for_data(1.0, 1.0, c0, &m, 0.5, 1.5).is_err());
    }
}
