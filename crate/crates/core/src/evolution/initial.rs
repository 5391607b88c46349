use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::spectral::{Complex64, Grid2D, ScalarField2D};

/// Smooth named initial profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// `amplitude · cos(k·x)` with `k` given in integer multiples of `2π/L`.
    SingleMode {
        k: [i64; 2],
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Periodized `amplitude · exp(−|x − center|²/(2 width²))`.
    GaussianBump {
        center: [f64; 2],
        width: f64,
        amplitude: f64,
    },
    /// Gaussian random coefficients with `|θ̂(k)| ∝ (1 + |k|²)^{−spectrum_decay/2}`
    /// inside the dealiased band, rescaled to `‖θ₀‖_∞ = amplitude`.
    RandomSmooth {
        seed: u64,
        spectrum_decay: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl InitialData {
    pub fn build(&self, grid: &Grid2D) -> Result<ScalarField2D> {
        match *self {
            InitialData::SingleMode { k, amplitude } => {
                let n = grid.n() as i64;
                if k[0].abs() >= n / 2 || k[1].abs() >= n / 2 {
                    return domain(format!("mode {k:?} is not resolved below Nyquist on {n}²"));
                }
                let k0 = grid.k0();
                let (a, b) = (k0 * k[0] as f64, k0 * k[1] as f64);
                Ok(ScalarField2D::from_fn(grid, |x, y| amplitude * (a * x + b * y).cos()))
            }
            InitialData::GaussianBump {
                center,
                width,
                amplitude,
            } => {
                if !(width > 0.0) {
                    return domain(format!("width = {width} must be positive"));
                }
                let l = grid.length();
                Ok(ScalarField2D::from_fn(grid, |x, y| {
                    let mut v = 0.0;
                    for i in -2..=2 {
                        for j in -2..=2 {
                            let dx = x - center[0] + i as f64 * l;
                            let dy = y - center[1] + j as f64 * l;
                            v += (-(dx * dx + dy * dy) / (2.0 * width * width)).exp();
                        }
                    }
                    amplitude * v
                }))
            }
            InitialData::RandomSmooth {
                seed,
                spectrum_decay,
                amplitude,
            } => random_smooth(grid, seed, spectrum_decay, amplitude),
        }
    }
}

fn random_smooth(grid: &Grid2D, seed: u64, decay: f64, amplitude: f64) -> Result<ScalarField2D> {
    if !(decay > 1.0) {
        return domain(format!("spectrum_decay = {decay} must exceed 1 for a smooth field"));
    }
    let n = grid.n();
    let band = (n / 3) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    for idx in 0..grid.len() {
        let neg = grid.negated(idx);
        // draw once per conjugate pair, on the lower flat index
        if neg <= idx {
            continue;
        }
        let (mx, my) = (grid.mode(idx % n), grid.mode(idx / n));
        if mx.abs() > band || my.abs() > band || grid.touches_nyquist(idx) {
            continue;
        }
        let k = grid.wavenumber(idx);
        let s = (1.0 + k * k).powf(-decay / 2.0);
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        let c = Complex64::new(re, im) * s;
        coeffs[idx] = c;
        coeffs[neg] = c.conj();
    }
    let raw = ScalarField2D::from_spectral(grid, coeffs)?;
    let m = raw.linf_norm();
    if m == 0.0 {
        return domain("random field has no resolved modes");
    }
    Ok(raw.scaled(amplitude / m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_field_is_real_mean_free_and_reproducible() {
        let g = Grid2D::periodic(32).unwrap();
        let profile = InitialData::RandomSmooth {
            seed: 7,
            spectrum_decay: 3.0,
            amplitude: 2.0,
        };
        let a = profile.build(&g).unwrap();
        let b = profile.build(&g).unwrap();
        assert_eq!(a.physical(), b.physical());
        assert!((a.linf_norm() - 2.0).abs() < 1e-14);
        assert!(a.mean().abs() < 1e-15);
        assert!(a.hermitian_defect() < 1e-14);
    }

    #[test]
    fn single_mode_and_bump() {
        let g = Grid2D::periodic(16).unwrap();
        let m = InitialData::SingleMode { k: [1, 2], amplitude: 1.0 }.build(&g).unwrap();
        assert!((m.at(0, 0) - 1.0).abs() < 1e-15);
        assert!(InitialData::SingleMode { k: [8, 0], amplitude: 1.0 }.build(&g).is_err());
        let b = InitialData::GaussianBump {
            center: [1.0, 1.0],
            width: 0.3,
            amplitude: 1.0,
        }
        .build(&g)
        .unwrap();
        assert!(b.linf_norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn parses_from_toml() {
        let d: InitialData = toml::from_str("profile = \"single_mode\"\nk = [3, 4]").unwrap();
        assert_eq!(d, InitialData::SingleMode { k: [3, 4], amplitude: 1.0 });
    }
}
