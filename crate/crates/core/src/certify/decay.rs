use serde::Serialize;

use crate::error::{domain, Result};

/// `‖θ₀‖_∞ / (1 + C (‖θ₀‖_∞/‖θ₀‖₂)^β t)^{1/β}`.
pub fn decay_bound(linf0: f64, l2_0: f64, beta: f64, c: f64, t: f64) -> f64 {
    let r = (linf0 / l2_0).powf(beta);
    linf0 / (1.0 + c * r * t).powf(1.0 / beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub c: f64,
    /// Root-mean-square residual of the linearized fit.
    pub rms_residual: f64,
    pub samples: usize,
}

/// Least-squares `C` in `(‖θ₀‖_∞/‖θ(t)‖_∞)^β − 1 = C (‖θ₀‖_∞/‖θ₀‖₂)^β t`,
/// using the samples with `t > 0`.
pub fn fit_decay_constant(linf0: f64, l2_0: f64, beta: f64, samples: &[(f64, f64)]) -> Result<DecayFit> {
    if !(linf0 > 0.0 && l2_0 > 0.0 && beta > 0.0) {
        return domain("decay fit needs positive norms and beta");
    }
    let r = (linf0 / l2_0).powf(beta);
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(t, v)| *t > 0.0 && *v > 0.0)
        .map(|&(t, v)| (r * t, (linf0 / v).powf(beta) - 1.0))
        .collect();
    if pts.is_empty() {
        return domain("decay fit needs at least one sample with t > 0");
    }
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let c = sxy / sxx;
    let ss: f64 = pts.iter().map(|(x, y)| (y - c * x).powi(2)).sum();
    Ok(DecayFit {
        c,
        rms_residual: (ss / pts.len() as f64).sqrt(),
        samples: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_at_initial_norm_and_decreases() {
        assert_eq!(decay_bound(2.0, 3.0, 1.5, 0.7, 0.0), 2.0);
        let mut prev = f64::INFINITY;
        for k in 0..50 {
            let v = decay_bound(2.0, 3.0, 1.5, 0.7, k as f64 * 0.3);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn large_time_asymptotics() {
        let (li, l2, b, c): (f64, f64, f64, f64) = (2.0, 3.0, 1.5, 0.7);
        let t: f64 = 1e6;
        let asym: f64 = t.powf(-1.0 / b) * l2 / c.powf(1.0 / b);
        let v = decay_bound(li, l2, b, c, t);
        assert!((v - asym).abs() < 0.01 * asym);
    }

    #[test]
    fn fit_recovers_exact_constant() {
        let (li, l2, b, c) = (1.3, 0.8, 0.9, 2.5);
        let s: Vec<(f64, f64)> = (0..20)
            .map(|k| {
                let t = k as f64 * 0.1;
                (t, decay_bound(li, l2, b, c, t))
            })
            .collect();
        let fit = fit_decay_constant(li, l2, b, &s).unwrap();
        assert!((fit.c - c).abs() < 1e-12);
        assert_eq!(fit.samples, 19);
    }
}
