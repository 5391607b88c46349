use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{Moc, Piece};
use crate::error::{domain, Result};

impl Moc {
    /// `ξ − ξ^{3/2}` on `]0, δ]`, then the tail with `ω′ = γ/(4(ξ + ξ^β))`.
    ///
    /// The concavity condition `δ ≤ 1/9` and the ordering `γ < δ` are recorded
    /// as notes rather than enforced, so that deliberately broken instances can
    /// still be handed to the certifier.
    pub fn kisel_nv(delta: f64, gamma: f64, beta: f64) -> Result<Moc> {
        if !(delta > 0.0 && delta < 1.0) {
            return domain(format!("delta = {delta} must lie in ]0, 1["));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return domain(format!("gamma = {gamma} must be positive"));
        }
        if !(beta > 0.0 && beta <= 2.0) {
            return domain(format!("beta = {beta} must lie in ]0, 2]"));
        }
        let start_value = delta - delta * delta.sqrt();
        let mut m = Moc::from_pieces(
            "kisel_nv",
            vec![
                Piece::LinearThreeHalves,
                Piece::SlowTail {
                    gamma,
                    beta,
                    start: delta,
                    start_value,
                },
            ],
            vec![delta],
        )?;
        if gamma >= delta {
            m = m.with_note(format!("gamma = {gamma} is not below delta = {delta}"));
        }
        if delta > 1.0 / 9.0 {
            m = m.with_note(format!("delta = {delta} exceeds 1/9; concavity is not guaranteed"));
        }
        Ok(m)
    }

    /// `(H/δ^γ) ξ^γ` on `]0, δ]`, then `H`.
    pub fn stationary_holder(h: f64, delta: f64, gamma: f64) -> Result<Moc> {
        check_holder(h, delta, gamma)?;
        Moc::from_pieces(
            "stationary_holder",
            vec![
                Piece::Power {
                    coef: h / delta.powf(gamma),
                    exponent: gamma,
                },
                Piece::Constant(h),
            ],
            vec![delta],
        )
    }

    /// The Hölder profile with its head `]0, ξ₀]` replaced by the tangent line
    /// at `ξ₀`, so `ω(0+) = (1 − γ)Hδ^{−γ}ξ₀^γ > 0`.
    pub fn eventual(h: f64, delta: f64, gamma: f64, xi0: f64) -> Result<Moc> {
        check_holder(h, delta, gamma)?;
        if !(xi0 > 0.0 && xi0 <= delta) {
            return domain(format!("xi0 = {xi0} must lie in ]0, delta = {delta}]"));
        }
        let coef = h / delta.powf(gamma);
        let head = Piece::Affine {
            slope: gamma * coef * xi0.powf(gamma - 1.0),
            intercept: (1.0 - gamma) * coef * xi0.powf(gamma),
        };
        let (pieces, breaks) = if xi0 < delta {
            (
                vec![
                    head,
                    Piece::Power {
                        coef,
                        exponent: gamma,
                    },
                    Piece::Constant(h),
                ],
                vec![xi0, delta],
            )
        } else {
            (vec![head, Piece::Constant(h)], vec![delta])
        };
        Moc::from_pieces("eventual", pieces, breaks)
    }
}

fn check_holder(h: f64, delta: f64, gamma: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return domain(format!("H = {h} must be positive"));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return domain(format!("delta = {delta} must be positive"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return domain(format!("gamma = {gamma} must lie in ]0, 1["));
    }
    Ok(())
}

/// Declarative description of a modulus, as it appears in run configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MocFamily {
    KiselNv {
        delta: f64,
        gamma: f64,
        beta: f64,
    },
    StationaryHolder {
        h: f64,
        delta: f64,
        gamma: f64,
    },
    Eventual {
        h: f64,
        delta: f64,
        gamma: f64,
        xi0: f64,
    },
    Power {
        coef: f64,
        exponent: f64,
    },
    /// CSV of `(ξ, ω)` rows.
    Tabulated {
        path: PathBuf,
    },
    Scaled {
        base: Box<MocFamily>,
        lambda: f64,
        alpha: f64,
        beta: f64,
    },
}

impl MocFamily {
    pub fn build(&self) -> Result<Moc> {
        match self {
            MocFamily::KiselNv { delta, gamma, beta } => Moc::kisel_nv(*delta, *gamma, *beta),
            MocFamily::StationaryHolder { h, delta, gamma } => {
                Moc::stationary_holder(*h, *delta, *gamma)
            }
            MocFamily::Eventual {
                h,
                delta,
                gamma,
                xi0,
            } => Moc::eventual(*h, *delta, *gamma, *xi0),
            MocFamily::Power { coef, exponent } => Moc::power(*coef, *exponent),
            MocFamily::Tabulated { path } => {
                let file = std::fs::File::open(path)?;
                super::read_tabulated_csv(file)
            }
            MocFamily::Scaled {
                base,
                lambda,
                alpha,
                beta,
            } => base.build()?.scale(*lambda, *alpha, *beta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_parse_from_toml() {
        let text = r#"
            family = "scaled"
            lambda = 2.0
            alpha = 0.3
            beta = 1.6
            [base]
            family = "kisel-nv"
            delta = 0.01
            gamma = 0.001
            beta = 1.6
        "#;
        let fam: MocFamily = toml::from_str(text).unwrap();
        let m = fam.build().unwrap();
        let direct = Moc::kisel_nv(0.01, 0.001, 1.6)
            .unwrap()
            .scale(2.0, 0.3, 1.6)
            .unwrap();
        assert_eq!(m.value(0.003), direct.value(0.003));
    }

    #[test]
    fn eventual_without_middle_piece() {
        let m = Moc::eventual(1.0, 0.1, 0.5, 0.1).unwrap();
        assert_eq!(m.pieces().len(), 2);
        assert!((m.value(0.1) - 1.0).abs() < 1e-15);
    }
}
