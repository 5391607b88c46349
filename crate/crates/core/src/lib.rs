//! Pseudo-spectral solver for the generalized SQG equation
//! `∂ₜθ + u·∇θ + νΛ^βθ − εΔθ = 0`, `u = Λ^α R^⊥ θ`, together with tools for
//! checking modulus-of-continuity arguments numerically.
//!
//! ```no_run
//! use gsqg::certify::{certify_subcritical, subcritical_thresholds, CriterionConstants, SubcriticalGrid};
//! use gsqg::moc::Moc;
//!
//! # fn main() -> gsqg::Result<()> {
//! let c = CriterionConstants::new(0.3, 1.6, 1.0);
//! let delta = subcritical_thresholds(&c, 1.0)?.delta / 2.0;
//! let gamma = subcritical_thresholds(&c, delta)?.gamma / 2.0;
//! let cert = certify_subcritical(&Moc::kisel_nv(delta, gamma, 1.6)?, &c, &SubcriticalGrid::default())?;
//! println!("{} with worst margin {:e}", cert.verdict, cert.worst_margin);
//! # Ok(())
//! # }
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod moc;
pub mod pairs;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
