//! Integrating-factor time stepping of
//! `∂ₜθ + u·∇θ + νΛ^βθ − εΔθ = 0`, `u = Λ^α R^⊥θ`, on the periodic grid.
//!
//! The dissipation `ν|k|^β + ε|k|²` is diagonal in Fourier space and is
//! applied exactly as `exp(−(ν|k|^β + ε|k|²) dt)`. The advection is written in
//! divergence form `−∇·(uθ)`, evaluated pseudo-spectrally with 2/3-rule
//! dealiasing, and advanced explicitly by Heun (RK2) or classical RK4.

mod initial;
mod params;
mod stepper;

pub use initial::InitialData;
pub use params::{Scheme, SolverParams};
pub use stepper::{SimulationState, Stepper};
