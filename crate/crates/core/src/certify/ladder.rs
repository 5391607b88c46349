use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Exponent bookkeeping of the bootstrap from `C^{σ₁}` to `C^{1+}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ladder {
    /// `max{α + 1 − β, α/2}`
    pub sigma0: f64,
    /// `2/(1 − σ₀)`
    pub p1: f64,
    /// `2/(σ₁ − (1 + α − β))`
    pub p2: f64,
    /// `σ₁ + β − 1 − α − 2/p`
    pub increment: f64,
    /// `σ₁, σ₂, …, σ_{N₀+1}` from the closed form.
    pub sigmas: Vec<f64>,
    /// First `N ≥ 1` with `σ_{N+1} > 1`.
    pub n0: usize,
    /// `p > max{p₁, p₂}`
    pub p_admissible: bool,
}

impl Ladder {
    /// `σ_{N+1} = 2^N·increment + 1 + α + 2/p − β`.
    pub fn sigma(&self, n_plus_one: usize) -> f64 {
        self.sigmas[n_plus_one - 1]
    }
}

const MAX_RUNGS: usize = 2000;

/// Iterate `σ_{N+1} = 2σ_N + β − 1 − α − 2/p` from `σ₁` until it exceeds 1.
pub fn regularity_ladder(alpha: f64, beta: f64, sigma1: f64, p: f64) -> Result<Ladder> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha = {alpha} must lie in ]0, 1["));
    }
    if !(beta > 0.0 && beta <= 2.0) {
        return domain(format!("beta = {beta} must lie in ]0, 2]"));
    }
    if !(p >= 1.0) {
        return domain(format!("p = {p} must be at least 1"));
    }
    let sigma0 = (alpha + 1.0 - beta).max(alpha / 2.0);
    if !(sigma1 > sigma0 && sigma1 < 1.0) {
        return domain(format!("sigma1 = {sigma1} must lie in ]σ₀, 1[ = ]{sigma0}, 1["));
    }
    let p1 = 2.0 / (1.0 - sigma0);
    let p2 = 2.0 / (sigma1 - (1.0 + alpha - beta));
    let min_p = p1.max(p2);
    let shift = 1.0 + alpha + 2.0 / p - beta;
    let increment = sigma1 - shift;
    let scale = sigma1.abs().max(shift.abs()).max(1.0);
    if increment <= 1e-12 * scale {
        return Err(Error::LadderStall { increment, min_p });
    }
    let mut sigmas = vec![sigma1];
    let mut n = 0;
    while *sigmas.last().expect("non-empty") <= 1.0 {
        n += 1;
        if n > MAX_RUNGS {
            return Err(Error::LadderStall { increment, min_p });
        }
        sigmas.push(2f64.powi(n as i32) * increment + shift);
    }
    Ok(Ladder {
        sigma0,
        p1,
        p2,
        increment,
        sigmas,
        n0: n,
        p_admissible: p > min_p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example() {
        let l = regularity_ladder(0.5, 1.2, 0.4, 40.0).unwrap();
        assert!((l.increment - 0.05).abs() < 1e-15);
        assert!((l.sigma(2) - 0.45).abs() < 1e-12);
        assert_eq!(l.n0, 4);
        assert!((l.sigma(5) - 1.15).abs() < 1e-12);
        assert!((l.p2 - 20.0).abs() < 1e-12);
        assert!(l.p_admissible);
    }

    #[test]
    fn closed_form_matches_recurrence() {
        let (a, b, s1, p) = (0.3, 0.9, 0.45, 60.0);
        let l = regularity_ladder(a, b, s1, p).unwrap();
        let mut s = s1;
        for k in 1..l.sigmas.len() {
            s = 2.0 * s + b - 1.0 - a - 2.0 / p;
            assert!((s - l.sigmas[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn stalls_at_p2() {
        let p2 = 2.0 / (0.4 - 0.3);
        match regularity_ladder(0.5, 1.2, 0.4, p2) {
            Err(Error::LadderStall { min_p, .. }) => assert!((min_p - 20.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }
}
