use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::fft::Fft2;
use crate::error::{domain, Result};

/// Uniform periodic `n × n` grid on a square torus of side `length`.
///
/// Storage is row-major with `x₂` as the slow index: value `(ix, iy)` lives at
/// `iy * n + ix`, and the same layout is used for spectral coefficients.
#[derive(Clone)]
pub struct Grid2D {
    n: usize,
    length: f64,
    pub(crate) fft: Arc<Fft2>,
}

impl PartialEq for Grid2D {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

impl fmt::Debug for Grid2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid2D")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl Grid2D {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return domain(format!("grid size {n} must be a power of two and at least 8"));
        }
        if !(length.is_finite() && length > 0.0) {
            return domain(format!("box length {length} must be positive and finite"));
        }
        Ok(Grid2D {
            n,
            length,
            fft: Arc::new(Fft2::new(n)),
        })
    }

    /// The standard `2π`-periodic box.
    pub fn periodic(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * PI)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn area(&self) -> f64 {
        self.length * self.length
    }

    /// Fundamental wavenumber `2π/L`.
    pub fn k0(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Signed integer mode of storage index `i` along one axis (`-n/2..n/2`).
    pub fn mode(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Storage index of a signed integer mode.
    pub fn index_of_mode(&self, m: i64) -> usize {
        m.rem_euclid(self.n as i64) as usize
    }

    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Whether a flat spectral index touches the Nyquist row or column.
    pub fn touches_nyquist(&self, idx: usize) -> bool {
        self.is_nyquist(idx % self.n) || self.is_nyquist(idx / self.n)
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.n + ix
    }

    /// Physical wavevector `(k₁, k₂)` at a flat spectral index.
    pub fn wavevector(&self, idx: usize) -> (f64, f64) {
        let k0 = self.k0();
        (
            k0 * self.mode(idx % self.n) as f64,
            k0 * self.mode(idx / self.n) as f64,
        )
    }

    pub fn wavenumber(&self, idx: usize) -> f64 {
        let (kx, ky) = self.wavevector(idx);
        kx.hypot(ky)
    }

    /// Flat index of `-k`.
    pub fn negated(&self, idx: usize) -> usize {
        let n = self.n;
        let (ix, iy) = (idx % n, idx / n);
        self.index((n - ix) % n, (n - iy) % n)
    }

    /// Physical coordinates of a grid node.
    pub fn coords(&self, ix: usize, iy: usize) -> (f64, f64) {
        (ix as f64 * self.dx(), iy as f64 * self.dx())
    }

    /// Flat-torus geodesic distance between two grid nodes.
    pub fn torus_distance(&self, a: (usize, usize), b: (usize, usize)) -> f64 {
        let n = self.n;
        let wrap = |p: usize, q: usize| {
            let d = p.abs_diff(q);
            d.min(n - d)
        };
        let dx = wrap(a.0, b.0) as f64;
        let dy = wrap(a.1, b.1) as f64;
        dx.hypot(dy) * self.dx()
    }

    /// Largest wavenumber magnitude represented on the grid (corner mode).
    pub fn max_wavenumber(&self) -> f64 {
        self.k0() * (self.n as f64 / 2.0) * std::f64::consts::SQRT_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid2D::new(6, 1.0).is_err());
        assert!(Grid2D::new(12, 1.0).is_err());
        assert!(Grid2D::new(16, 0.0).is_err());
        assert!(Grid2D::new(16, f64::NAN).is_err());
    }

    #[test]
    fn lattice_is_symmetric_with_single_zero_mode() {
        let g = Grid2D::periodic(16).unwrap();
        let zeros = (0..g.len()).filter(|&i| g.wavenumber(i) == 0.0).count();
        assert_eq!(zeros, 1);
        for idx in 0..g.len() {
            let (kx, ky) = g.wavevector(idx);
            let neg = g.negated(idx);
            let (nx, ny) = g.wavevector(neg);
            if g.touches_nyquist(idx) {
                continue;
            }
            assert_eq!((kx, ky), (-nx, -ny));
        }
    }

    #[test]
    fn torus_distance_wraps() {
        let g = Grid2D::new(8, 8.0).unwrap();
        assert_eq!(g.torus_distance((0, 0), (7, 0)), 1.0);
        assert_eq!(g.torus_distance((0, 0), (4, 0)), 4.0);
        assert!((g.torus_distance((1, 1), (7, 7)) - 8f64.sqrt()).abs() < 1e-15);
    }
}
