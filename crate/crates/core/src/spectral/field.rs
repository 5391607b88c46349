use std::sync::OnceLock;

use rustfft::num_complex::Complex64;

use super::grid::Grid2D;
use crate::error::{domain, Error, Result};

/// Real scalar field on a periodic grid.
///
/// A field is created from one representation and the other is computed on
/// first access, so both are valid once touched. Fields are immutable.
#[derive(Debug, Clone)]
pub struct ScalarField2D {
    grid: Grid2D,
    physical: OnceLock<Vec<f64>>,
    spectral: OnceLock<Vec<Complex64>>,
}

impl ScalarField2D {
    pub fn from_physical(grid: &Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return domain(format!(
                "expected {} physical values, got {}",
                grid.len(),
                values.len()
            ));
        }
        Ok(ScalarField2D {
            grid: grid.clone(),
            physical: OnceLock::from(values),
            spectral: OnceLock::new(),
        })
    }

    /// Build from Fourier-series coefficients. The physical representation
    /// is the real part of the inverse transform.
    pub fn from_spectral(grid: &Grid2D, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return domain(format!(
                "expected {} spectral coefficients, got {}",
                grid.len(),
                coeffs.len()
            ));
        }
        Ok(ScalarField2D {
            grid: grid.clone(),
            physical: OnceLock::new(),
            spectral: OnceLock::from(coeffs),
        })
    }

    pub fn from_fn(grid: &Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for iy in 0..n {
            for ix in 0..n {
                let (x, y) = grid.coords(ix, iy);
                values.push(f(x, y));
            }
        }
        ScalarField2D {
            grid: grid.clone(),
            physical: OnceLock::from(values),
            spectral: OnceLock::new(),
        }
    }

    pub fn zeros(grid: &Grid2D) -> Self {
        ScalarField2D {
            grid: grid.clone(),
            physical: OnceLock::from(vec![0.0; grid.len()]),
            spectral: OnceLock::from(vec![Complex64::new(0.0, 0.0); grid.len()]),
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn has_physical(&self) -> bool {
        self.physical.get().is_some()
    }

    pub fn has_spectral(&self) -> bool {
        self.spectral.get().is_some()
    }

    pub fn physical(&self) -> &[f64] {
        self.physical.get_or_init(|| {
            let mut buf = self.spectral.get().expect("field has a representation").clone();
            self.grid.fft.inverse(&mut buf);
            buf.into_iter().map(|c| c.re).collect()
        })
    }

    pub fn spectral(&self) -> &[Complex64] {
        self.spectral.get_or_init(|| {
            let mut buf: Vec<Complex64> = self
                .physical
                .get()
                .expect("field has a representation")
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect();
            self.grid.fft.forward(&mut buf);
            buf
        })
    }

    /// Value at node `(ix, iy)`.
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.physical()[self.grid.index(ix, iy)]
    }

    /// Apply a modewise map `c ↦ g(idx, c)` and return the spectral result.
    pub fn map_modes(&self, g: impl Fn(usize, Complex64) -> Complex64) -> ScalarField2D {
        let coeffs: Vec<Complex64> = self
            .spectral()
            .iter()
            .enumerate()
            .map(|(idx, &c)| g(idx, c))
            .collect();
        ScalarField2D {
            grid: self.grid.clone(),
            physical: OnceLock::new(),
            spectral: OnceLock::from(coeffs),
        }
    }

    pub fn scaled(&self, factor: f64) -> ScalarField2D {
        let values: Vec<f64> = self.physical().iter().map(|v| v * factor).collect();
        ScalarField2D {
            grid: self.grid.clone(),
            physical: OnceLock::from(values),
            spectral: OnceLock::new(),
        }
    }

    pub fn sub(&self, other: &ScalarField2D) -> Result<ScalarField2D> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .physical()
            .iter()
            .zip(other.physical())
            .map(|(a, b)| a - b)
            .collect();
        ScalarField2D::from_physical(&self.grid, values)
    }

    /// Spatial mean (the zero mode).
    pub fn mean(&self) -> f64 {
        self.spectral()[0].re
    }

    /// `‖f‖_{L²}` over the torus, computed spectrally (Parseval).
    pub fn l2_norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// `‖f‖²_{L²}` over the torus, computed spectrally.
    pub fn energy(&self) -> f64 {
        let sum: f64 = self.spectral().iter().map(|c| c.norm_sqr()).sum();
        sum * self.grid.area()
    }

    /// `‖f‖_{L²}` from physical samples (rectangle rule, exact for trigonometric data).
    pub fn l2_norm_physical(&self) -> f64 {
        let sum: f64 = self.physical().iter().map(|v| v * v).sum();
        (sum * self.grid.dx() * self.grid.dx()).sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.physical().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max f − min f`.
    pub fn oscillation(&self) -> f64 {
        let (lo, hi) = self
            .physical()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        hi - lo
    }

    /// Largest `|â(−k) − conj(â(k))|` over modes off the Nyquist lines.
    pub fn hermitian_defect(&self) -> f64 {
        let c = self.spectral();
        (0..c.len())
            .filter(|&i| !self.grid.touches_nyquist(i))
            .map(|i| (c[self.grid.negated(i)] - c[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn has_non_finite(&self) -> bool {
        match (self.physical.get(), self.spectral.get()) {
            (Some(p), _) => p.iter().any(|v| !v.is_finite()),
            (None, Some(s)) => s.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()),
            (None, None) => false,
        }
    }
}

/// Pair of scalar components on a common grid.
#[derive(Debug, Clone)]
pub struct VectorField2D {
    pub u1: ScalarField2D,
    pub u2: ScalarField2D,
}

impl VectorField2D {
    pub fn new(u1: ScalarField2D, u2: ScalarField2D) -> Result<Self> {
        if u1.grid() != u2.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(VectorField2D { u1, u2 })
    }

    pub fn grid(&self) -> &Grid2D {
        self.u1.grid()
    }

    /// `max_k |k·û(k)|`.
    pub fn max_spectral_divergence(&self) -> f64 {
        let g = self.grid();
        let (a, b) = (self.u1.spectral(), self.u2.spectral());
        (0..g.len())
            .map(|idx| {
                let (kx, ky) = g.wavevector(idx);
                (a[idx] * kx + b[idx] * ky).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max_x |u(x)|`.
    pub fn linf_norm(&self) -> f64 {
        self.u1
            .physical()
            .iter()
            .zip(self.u2.physical())
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: &Grid2D, seed: u64) -> ScalarField2D {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        ScalarField2D::from_physical(grid, values).unwrap()
    }

    #[test]
    fn round_trip_reproduces_values() {
        let g = Grid2D::periodic(32).unwrap();
        let f = random_field(&g, 3);
        let back = ScalarField2D::from_spectral(&g, f.spectral().to_vec()).unwrap();
        let scale = f.linf_norm();
        for (a, b) in f.physical().iter().zip(back.physical()) {
            assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn real_data_has_hermitian_spectrum() {
        let g = Grid2D::periodic(16).unwrap();
        let f = random_field(&g, 11);
        assert!(f.hermitian_defect() < 1e-15);
    }

    #[test]
    fn parseval_matches_physical_norm() {
        let g = Grid2D::new(32, 3.0).unwrap();
        let f = random_field(&g, 5);
        let rel = (f.l2_norm() - f.l2_norm_physical()).abs() / f.l2_norm_physical();
        assert!(rel < 1e-10, "{rel}");
    }

    #[test]
    fn single_cosine_has_half_amplitude_coefficients() {
        let g = Grid2D::periodic(16).unwrap();
        let f = ScalarField2D::from_fn(&g, |x, _| (3.0 * x).cos());
        let c = f.spectral();
        assert!((c[g.index(3, 0)].re - 0.5).abs() < 1e-14);
        assert!((c[g.index(13, 0)].re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_wrong_length() {
        let g = Grid2D::periodic(8).unwrap();
        assert!(ScalarField2D::from_physical(&g, vec![0.0; 10]).is_err());
    }
}
