//! Periodic-grid fields and Fourier-multiplier operators.
//!
//! The whole-plane setting is approximated by a torus of side `L`. Spectral
//! coefficients are stored as Fourier-series coefficients, i.e. the forward
//! transform carries the `1/n²` normalization, so a field `cos(k·x)` has two
//! coefficients of magnitude `1/2`.

mod checkpoint;
mod fft;
mod field;
mod grid;
mod ops;

pub use checkpoint::{read_field, write_field, write_field_csv, Representation};
pub use field::{ScalarField2D, VectorField2D};
pub use grid::Grid2D;
pub use ops::{
    dealias, dyadic_shell_energy, fractional_laplacian, gradient, riesz_perp, shell_index_range,
    truncate_modes, velocity, ShellEnergy,
};

pub use rustfft::num_complex::Complex64;
