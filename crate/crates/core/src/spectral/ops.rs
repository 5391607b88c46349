use rustfft::num_complex::Complex64;

use super::field::{ScalarField2D, VectorField2D};
use super::grid::Grid2D;
use crate::error::{domain, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `Λ^s f` with symbol `|k|^s`; the zero mode is annihilated for every `s`.
pub fn fractional_laplacian(f: &ScalarField2D, s: f64) -> Result<ScalarField2D> {
    if !(0.0..=2.0).contains(&s) {
        return domain(format!("fractional exponent {s} outside [0, 2]"));
    }
    let g = f.grid();
    Ok(f.map_modes(|idx, c| {
        let k = g.wavenumber(idx);
        if k == 0.0 {
            ZERO
        } else {
            c * k.powf(s)
        }
    }))
}

/// Constitutive velocity `u = Λ^α R^⊥ θ`, i.e. `û = i|k|^{α−1}(−k₂, k₁) θ̂`.
pub fn velocity(theta: &ScalarField2D, alpha: f64) -> Result<VectorField2D> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha = {alpha} must lie in ]0, 1["));
    }
    Ok(perp_multiplier(theta, alpha - 1.0))
}

/// `R^⊥ θ = (−R₂θ, R₁θ)` with `R_j` the multiplier `i k_j/|k|`.
pub fn riesz_perp(theta: &ScalarField2D) -> VectorField2D {
    perp_multiplier(theta, -1.0)
}

fn perp_multiplier(theta: &ScalarField2D, power: f64) -> VectorField2D {
    let g = theta.grid();
    let symbol = |idx: usize| -> Option<(f64, f64, f64)> {
        let k = g.wavenumber(idx);
        if k == 0.0 || g.touches_nyquist(idx) {
            None
        } else {
            let (kx, ky) = g.wavevector(idx);
            Some((k.powf(power), kx, ky))
        }
    };
    let u1 = theta.map_modes(|idx, c| match symbol(idx) {
        Some((m, _, ky)) => Complex64::new(0.0, -m * ky) * c,
        None => ZERO,
    });
    let u2 = theta.map_modes(|idx, c| match symbol(idx) {
        Some((m, kx, _)) => Complex64::new(0.0, m * kx) * c,
        None => ZERO,
    });
    VectorField2D { u1, u2 }
}

/// `∇f` with symbol `i k`.
pub fn gradient(f: &ScalarField2D) -> VectorField2D {
    let g = f.grid();
    let component = |axis: usize| {
        f.map_modes(|idx, c| {
            if g.touches_nyquist(idx) {
                return ZERO;
            }
            let (kx, ky) = g.wavevector(idx);
            let k = if axis == 0 { kx } else { ky };
            Complex64::new(0.0, k) * c
        })
    };
    VectorField2D {
        u1: component(0),
        u2: component(1),
    }
}

/// Zero every mode with `|m_i| > fraction · n/2` on either axis.
pub fn dealias(f: &ScalarField2D, fraction: f64) -> ScalarField2D {
    let g = f.grid();
    let cutoff = fraction * (g.n() / 2) as f64;
    f.map_modes(|idx, c| {
        if keeps_mode(g, idx, cutoff) {
            c
        } else {
            ZERO
        }
    })
}

pub(crate) fn keeps_mode(g: &Grid2D, idx: usize, cutoff: f64) -> bool {
    let mx = g.mode(idx % g.n()).unsigned_abs() as f64;
    let my = g.mode(idx / g.n()).unsigned_abs() as f64;
    mx <= cutoff && my <= cutoff
}

/// Galerkin truncation: zero every mode with `|k| > modes · 2π/L`.
pub fn truncate_modes(f: &ScalarField2D, modes: f64) -> ScalarField2D {
    let g = f.grid();
    let kmax = modes * g.k0();
    f.map_modes(|idx, c| if g.wavenumber(idx) > kmax { ZERO } else { c })
}

/// Energy of one sharp dyadic shell `2^j ≤ |k| < 2^{j+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellEnergy {
    pub j: i32,
    pub energy: f64,
    /// Set when the shell lies outside the band resolved by the grid.
    pub unresolved: bool,
}

/// Range of shell indices `j` that intersect the resolved nonzero wavenumbers.
pub fn shell_index_range(grid: &Grid2D) -> (i32, i32) {
    let lo = grid.k0().log2().floor() as i32;
    let hi = grid.max_wavenumber().log2().floor() as i32;
    (lo, hi)
}

/// `‖Δ_j f‖²_{L²}` for the sharp annulus `2^j ≤ |k| < 2^{j+1}` (Plancherel).
pub fn dyadic_shell_energy(f: &ScalarField2D, j: i32) -> ShellEnergy {
    let g = f.grid();
    let (lo, hi) = shell_index_range(g);
    if j < lo || j > hi {
        return ShellEnergy {
            j,
            energy: 0.0,
            unresolved: true,
        };
    }
    let (a, b) = (2f64.powi(j), 2f64.powi(j + 1));
    let sum: f64 = f
        .spectral()
        .iter()
        .enumerate()
        .filter(|(idx, _)| {
            let k = g.wavenumber(*idx);
            k >= a && k < b
        })
        .map(|(_, c)| c.norm_sqr())
        .sum();
    ShellEnergy {
        j,
        energy: sum * g.area(),
        unresolved: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(g: &Grid2D, seed: u64) -> ScalarField2D {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        ScalarField2D::from_physical(g, values).unwrap()
    }

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn single_mode_symbol_action() {
        let g = Grid2D::periodic(32).unwrap();
        let f = ScalarField2D::from_fn(&g, |x, y| (3.0 * x + 4.0 * y).cos());
        let out = fractional_laplacian(&f, 1.5).unwrap();
        let expect = f.scaled(5f64.powf(1.5));
        assert!(max_diff(out.physical(), expect.physical()) < 1e-11);
    }

    #[test]
    fn constant_is_annihilated() {
        let g = Grid2D::periodic(16).unwrap();
        let f = ScalarField2D::from_fn(&g, |_, _| 2.5);
        let out = fractional_laplacian(&f, 0.7).unwrap();
        assert!(out.linf_norm() < 1e-14);
    }

    #[test]
    fn order_zero_removes_mean() {
        let g = Grid2D::periodic(32).unwrap();
        let f = random_field(&g, 9);
        let out = fractional_laplacian(&f, 0.0).unwrap();
        let mean = f.physical().iter().sum::<f64>() / g.len() as f64;
        let direct: Vec<f64> = f.physical().iter().map(|v| v - mean).collect();
        assert!(max_diff(out.physical(), &direct) < 1e-12);
    }

    #[test]
    fn exponent_domain_checked() {
        let g = Grid2D::periodic(8).unwrap();
        let f = ScalarField2D::zeros(&g);
        assert!(fractional_laplacian(&f, 2.5).is_err());
        assert!(fractional_laplacian(&f, -0.1).is_err());
        assert!(velocity(&f, 1.0).is_err());
    }

    #[test]
    fn velocity_unit_wavenumber() {
        let g = Grid2D::periodic(16).unwrap();
        let theta = ScalarField2D::from_fn(&g, |x, _| x.cos());
        let u = velocity(&theta, 0.4).unwrap();
        let idx = g.index(1, 0);
        let th = theta.spectral()[idx];
        assert!((u.u1.spectral()[idx]).norm() < 1e-15);
        assert!((u.u2.spectral()[idx] - Complex64::new(0.0, 1.0) * th).norm() < 1e-15);
    }

    #[test]
    fn velocity_closed_form_symbol() {
        let g = Grid2D::periodic(16).unwrap();
        let theta = ScalarField2D::from_fn(&g, |x, y| (3.0 * x + 4.0 * y).sin());
        let u = velocity(&theta, 0.5).unwrap();
        let idx = g.index(3, 4);
        let th = theta.spectral()[idx];
        let m = 5f64.powf(-0.5);
        let e1 = Complex64::new(0.0, -4.0 * m) * th;
        let e2 = Complex64::new(0.0, 3.0 * m) * th;
        assert!((u.u1.spectral()[idx] - e1).norm() < 1e-15);
        assert!((u.u2.spectral()[idx] - e2).norm() < 1e-15);
    }

    #[test]
    fn velocity_is_divergence_free_and_real() {
        let g = Grid2D::periodic(32).unwrap();
        let theta = random_field(&g, 1);
        let u = velocity(&theta, 0.3).unwrap();
        let scale = u.u1.l2_norm().max(u.u2.l2_norm());
        assert!(u.max_spectral_divergence() <= 1e-12 * scale.max(1.0));
        assert!(u.u1.hermitian_defect() < 1e-14);
        assert!(u.u1.spectral()[0].norm() == 0.0);
    }

    #[test]
    fn velocity_commutes_with_fractional_laplacian() {
        let g = Grid2D::periodic(32).unwrap();
        let theta = random_field(&g, 2);
        let a = velocity(&fractional_laplacian(&theta, 0.8).unwrap(), 0.3).unwrap();
        let lu = velocity(&theta, 0.3).unwrap();
        let b1 = fractional_laplacian(&lu.u1, 0.8).unwrap();
        let scale = a.u1.linf_norm();
        assert!(max_diff(a.u1.physical(), b1.physical()) < 1e-12 * scale);
    }

    #[test]
    fn gradient_of_cosine() {
        let g = Grid2D::periodic(16).unwrap();
        let f = ScalarField2D::from_fn(&g, |x, _| x.cos());
        let grad = gradient(&f);
        let expect = ScalarField2D::from_fn(&g, |x, _| -x.sin());
        assert!(max_diff(grad.u1.physical(), expect.physical()) < 1e-13);
        assert!(grad.u2.linf_norm() < 1e-14);
    }

    #[test]
    fn shell_membership_and_partition() {
        let g = Grid2D::periodic(32).unwrap();
        let f = ScalarField2D::from_fn(&g, |x, y| (3.0 * x + 4.0 * y).cos());
        let e2 = dyadic_shell_energy(&f, 2);
        assert!(!e2.unresolved);
        assert!((e2.energy - f.energy()).abs() < 1e-10 * f.energy());

        let r = random_field(&g, 4);
        let (lo, hi) = shell_index_range(&g);
        let total: f64 = (lo..=hi).map(|j| dyadic_shell_energy(&r, j).energy).sum::<f64>()
            + r.spectral()[0].norm_sqr() * g.area();
        assert!((total - r.energy()).abs() < 1e-10 * r.energy());
        assert!(dyadic_shell_energy(&r, hi + 1).unresolved);
        assert!(dyadic_shell_energy(&r, lo - 1).unresolved);
    }
}
