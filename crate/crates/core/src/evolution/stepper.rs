use rustfft::num_complex::Complex64;

use super::params::{Scheme, SolverParams};
use crate::error::{domain, Error, Result};
use crate::spectral::{Grid2D, ScalarField2D};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Solution snapshot plus the running integrals the diagnostics need.
#[derive(Debug, Clone)]
pub struct SimulationState {
    pub t: f64,
    pub theta: ScalarField2D,
    pub step_count: u64,
    /// `‖θ₀‖²_{L²}` of the state the run started from.
    pub initial_energy: f64,
    /// `∫₀ᵗ 2(ν‖Λ^{β/2}θ‖² + ε‖∇θ‖²) dτ`, one log-mean per mode and step.
    pub dissipated: f64,
    /// `∫₀ᵗ ‖∇θ‖_∞^{2+2α−β} dτ` by the trapezoid rule.
    pub blowup_integral: f64,
    pub grad_linf: f64,
    /// `‖u‖_∞` at the start of the last step (0 before the first).
    pub velocity_linf: f64,
}

impl SimulationState {
    pub fn energy_residual(&self) -> f64 {
        self.theta.energy() + self.dissipated - self.initial_energy
    }
}

/// Precomputed multipliers for one grid and parameter set.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Grid2D,
    params: SolverParams,
    decay: Vec<f64>,
    full: Vec<f64>,
    half: Vec<f64>,
    /// Dealiasing (and Galerkin) mask for the nonlinear term.
    keep: Vec<bool>,
    /// Galerkin mask applied to the state.
    galerkin: Vec<bool>,
    kx: Vec<f64>,
    ky: Vec<f64>,
    /// `|k|^{α−1}`, zero on the mean and Nyquist lines.
    vel: Vec<f64>,
    warnings: Vec<String>,
}

impl Stepper {
    pub fn new(grid: &Grid2D, params: &SolverParams) -> Result<Stepper> {
        let warnings = params.validate()?;
        let n = grid.n();
        let cutoff = params.dealias_fraction * (n / 2) as f64;
        let kmax = params.truncation_modes.map(|m| m * grid.k0());
        let len = grid.len();
        let (mut decay, mut full, mut half) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
        let (mut keep, mut galerkin) = (vec![false; len], vec![true; len]);
        let (mut kx, mut ky, mut vel) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
        for idx in 0..len {
            let (a, b) = grid.wavevector(idx);
            let k = grid.wavenumber(idx);
            let d = params.nu * k.powf(params.beta) + params.epsilon * k * k;
            decay[idx] = d;
            full[idx] = (-d * params.dt).exp();
            half[idx] = (-0.5 * d * params.dt).exp();
            let inside = kmax.is_none_or(|m| k <= m);
            galerkin[idx] = inside;
            let mx = grid.mode(idx % n).unsigned_abs() as f64;
            let my = grid.mode(idx / n).unsigned_abs() as f64;
            keep[idx] = inside && mx <= cutoff && my <= cutoff && !grid.touches_nyquist(idx);
            if !grid.touches_nyquist(idx) {
                kx[idx] = a;
                ky[idx] = b;
                if k > 0.0 {
                    vel[idx] = k.powf(params.alpha - 1.0);
                }
            }
        }
        Ok(Stepper {
            grid: grid.clone(),
            params: params.clone(),
            decay,
            full,
            half,
            keep,
            galerkin,
            kx,
            ky,
            vel,
            warnings,
        })
    }

    pub fn params(&self) -> &SolverParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// Advisory messages produced by parameter validation.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Start a run from `theta0`, applying the Galerkin cutoff if configured.
    pub fn initial_state(&self, theta0: &ScalarField2D) -> Result<SimulationState> {
        if theta0.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        if theta0.has_non_finite() {
            return domain("initial data contains non-finite values");
        }
        let coeffs: Vec<Complex64> = theta0
            .spectral()
            .iter()
            .zip(&self.galerkin)
            .map(|(&c, &g)| if g { c } else { ZERO })
            .collect();
        let grad_linf = self.grad_linf(&coeffs);
        let theta = ScalarField2D::from_spectral(&self.grid, coeffs)?;
        Ok(SimulationState {
            t: 0.0,
            initial_energy: theta.energy(),
            theta,
            step_count: 0,
            dissipated: 0.0,
            blowup_integral: 0.0,
            grad_linf,
            velocity_linf: 0.0,
        })
    }

    fn inverse(&self, mut c: Vec<Complex64>) -> Vec<f64> {
        self.grid.fft.inverse(&mut c);
        c.into_iter().map(|z| z.re).collect()
    }

    fn forward(&self, v: &[f64]) -> Vec<Complex64> {
        let mut c: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.grid.fft.forward(&mut c);
        c
    }

    /// `−∇·(uθ)` of the dealiased state, dealiased again. Also returns `‖u‖_∞`.
    fn nonlinear(&self, theta: &[Complex64]) -> (Vec<Complex64>, f64) {
        let len = theta.len();
        let mut th = vec![ZERO; len];
        let mut u1 = vec![ZERO; len];
        let mut u2 = vec![ZERO; len];
        for idx in 0..len {
            if self.keep[idx] {
                let c = theta[idx];
                th[idx] = c;
                let m = self.vel[idx];
                u1[idx] = Complex64::new(0.0, -m * self.ky[idx]) * c;
                u2[idx] = Complex64::new(0.0, m * self.kx[idx]) * c;
            }
        }
        let th = self.inverse(th);
        let u1 = self.inverse(u1);
        let u2 = self.inverse(u2);
        let mut umax: f64 = 0.0;
        let mut f1 = vec![0.0; len];
        let mut f2 = vec![0.0; len];
        for i in 0..len {
            umax = umax.max(u1[i].hypot(u2[i]));
            f1[i] = u1[i] * th[i];
            f2[i] = u2[i] * th[i];
        }
        let f1 = self.forward(&f1);
        let f2 = self.forward(&f2);
        let out = (0..len)
            .map(|idx| {
                if self.keep[idx] {
                    -Complex64::new(0.0, 1.0) * (f1[idx] * self.kx[idx] + f2[idx] * self.ky[idx])
                } else {
                    ZERO
                }
            })
            .collect();
        (out, umax)
    }

    fn grad_linf(&self, theta: &[Complex64]) -> f64 {
        let gx: Vec<Complex64> = theta
            .iter()
            .zip(&self.kx)
            .map(|(&c, &k)| Complex64::new(0.0, k) * c)
            .collect();
        let gy: Vec<Complex64> = theta
            .iter()
            .zip(&self.ky)
            .map(|(&c, &k)| Complex64::new(0.0, k) * c)
            .collect();
        let gx = self.inverse(gx);
        let gy = self.inverse(gy);
        gx.iter()
            .zip(&gy)
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    }

    fn masked(&self, idx: usize, c: Complex64) -> Complex64 {
        if self.keep[idx] {
            c
        } else {
            ZERO
        }
    }

    /// `‖u‖_∞` of the dealiased state, the velocity the advection actually uses.
    fn velocity_linf(&self, theta: &[Complex64]) -> f64 {
        let u1 = theta
            .iter()
            .enumerate()
            .map(|(i, &c)| self.masked(i, Complex64::new(0.0, -self.vel[i] * self.ky[i]) * c))
            .collect();
        let u2 = theta
            .iter()
            .enumerate()
            .map(|(i, &c)| self.masked(i, Complex64::new(0.0, self.vel[i] * self.kx[i]) * c))
            .collect();
        let (u1, u2) = (self.inverse(u1), self.inverse(u2));
        u1.iter().zip(&u2).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max)
    }

    /// `cfl_safety·Δx/‖u‖_∞` for the current state; `∞` when `u ≡ 0`.
    pub fn cfl_dt(&self, state: &SimulationState) -> f64 {
        let umax = self.velocity_linf(state.theta.spectral());
        if umax == 0.0 {
            f64::INFINITY
        } else {
            self.params.cfl_safety * self.grid.dx() / umax
        }
    }

    /// Advance one step of size `params.dt`.
    pub fn step(&self, state: &SimulationState) -> Result<SimulationState> {
        self.step_by(state, self.params.dt)
    }

    fn step_by(&self, state: &SimulationState, dt: f64) -> Result<SimulationState> {
        let th0 = state.theta.spectral();
        let (k1, umax) = self.nonlinear(th0);
        if umax > 0.0 {
            let limit = self.params.cfl_safety * self.grid.dx() / umax;
            if dt > limit && !self.params.force {
                return Err(Error::Cfl { dt, limit });
            }
        }
        let (full, half) = if dt == self.params.dt {
            (self.full.clone(), self.half.clone())
        } else {
            (
                self.decay.iter().map(|d| (-d * dt).exp()).collect(),
                self.decay.iter().map(|d| (-0.5 * d * dt).exp()).collect(),
            )
        };
        let len = th0.len();
        let mut next: Vec<Complex64> = match self.params.scheme {
            Scheme::Rk2 => {
                let pred: Vec<Complex64> =
                    (0..len).map(|i| full[i] * (th0[i] + dt * k1[i])).collect();
                let (k2, _) = self.nonlinear(&pred);
                (0..len)
                    .map(|i| full[i] * (th0[i] + 0.5 * dt * k1[i]) + 0.5 * dt * k2[i])
                    .collect()
            }
            Scheme::Rk4 => {
                let a: Vec<Complex64> =
                    (0..len).map(|i| half[i] * (th0[i] + 0.5 * dt * k1[i])).collect();
                let (k2, _) = self.nonlinear(&a);
                let b: Vec<Complex64> =
                    (0..len).map(|i| half[i] * th0[i] + 0.5 * dt * k2[i]).collect();
                let (k3, _) = self.nonlinear(&b);
                let c: Vec<Complex64> = (0..len)
                    .map(|i| full[i] * th0[i] + dt * half[i] * k3[i])
                    .collect();
                let (k4, _) = self.nonlinear(&c);
                (0..len)
                    .map(|i| {
                        full[i] * th0[i]
                            + dt / 6.0
                                * (full[i] * k1[i] + 2.0 * half[i] * (k2[i] + k3[i]) + k4[i])
                    })
                    .collect()
            }
        };
        for (c, &g) in next.iter_mut().zip(&self.galerkin) {
            if !g {
                *c = ZERO;
            }
        }

        let t = state.t + dt;
        let step_count = state.step_count + 1;
        let dissipated = state.dissipated
            + self.grid.area()
                * (0..len)
                    .map(|i| {
                        let d = self.decay[i];
                        if d == 0.0 {
                            0.0
                        } else {
                            2.0 * d * dt * log_mean(th0[i].norm_sqr(), next[i].norm_sqr())
                        }
                    })
                    .sum::<f64>();
        let finite = next.iter().all(|c| c.re.is_finite() && c.im.is_finite());
        let grad_linf = if finite { self.grad_linf(&next) } else { f64::NAN };
        let p = 2.0 + 2.0 * self.params.alpha - self.params.beta;
        let blowup_integral = state.blowup_integral
            + 0.5 * dt * (state.grad_linf.powf(p) + grad_linf.powf(p));
        if !finite || !grad_linf.is_finite() {
            return Err(Error::BlowUp {
                step: step_count,
                t,
                reason: "non-finite values in the solution".into(),
                blowup_integral: state.blowup_integral,
            });
        }
        if grad_linf > self.params.grad_ceiling {
            return Err(Error::BlowUp {
                step: step_count,
                t,
                reason: format!(
                    "‖∇θ‖_∞ = {grad_linf:e} exceeds the ceiling {:e}",
                    self.params.grad_ceiling
                ),
                blowup_integral,
            });
        }
        Ok(SimulationState {
            t,
            theta: ScalarField2D::from_spectral(&self.grid, next)?,
            step_count,
            initial_energy: state.initial_energy,
            dissipated,
            blowup_integral,
            grad_linf,
            velocity_linf: umax,
        })
    }

    /// Step until `t_target`, shortening the last step to land on it exactly.
    pub fn advance_to(&self, state: SimulationState, t_target: f64) -> Result<SimulationState> {
        let mut s = state;
        let dt = self.params.dt;
        while t_target - s.t > 1e-9 * dt {
            let h = (t_target - s.t).min(dt);
            // avoid a sliver step from accumulated rounding in t
            let h = if (h - dt).abs() <= 1e-9 * dt { dt } else { h };
            s = self.step_by(&s, h)?;
        }
        if s.t != t_target && (s.t - t_target).abs() <= 1e-9 * dt {
            s.t = t_target;
        }
        Ok(s)
    }

    /// Run to `params.t_end`, calling `observe` at `t = 0` and every
    /// `sample_interval` (and at the end). Samples already observed are kept
    /// by the caller when an error stops the run.
    pub fn run<F: FnMut(&SimulationState)>(
        &self,
        theta0: &ScalarField2D,
        sample_interval: f64,
        mut observe: F,
    ) -> Result<SimulationState> {
        if !(sample_interval > 0.0) {
            return domain("sample interval must be positive");
        }
        let mut s = self.initial_state(theta0)?;
        observe(&s);
        let t_end = self.params.t_end;
        let mut k = 1u64;
        while s.t < t_end - 1e-12 * self.params.dt {
            let target = (k as f64 * sample_interval).min(t_end);
            s = self.advance_to(s, target)?;
            observe(&s);
            k += 1;
        }
        Ok(s)
    }
}

/// `(a − b)/ln(a/b)`, the exact time average of an exponential between `a` and `b`.
fn log_mean(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let x = (b - a) / a;
    if x == 0.0 {
        a
    } else {
        a * x / x.ln_1p()
    }
}
