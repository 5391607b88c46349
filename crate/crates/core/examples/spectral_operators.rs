//! Fourier multipliers on the periodic grid: Λ^s, the velocity law, gradients,
//! dealiasing and Littlewood–Paley shells.

use gsqg::spectral::{
    dealias, dyadic_shell_energy, fractional_laplacian, gradient, shell_index_range, velocity,
    Grid2D, ScalarField2D,
};

fn main() -> gsqg::Result<()> {
    let grid = Grid2D::periodic(64)?;
    let f = ScalarField2D::from_fn(&grid, |x, y| (3.0 * x).sin() + 0.5 * (x + 2.0 * y).cos());

    // Λ^s scales the |k| = 3 mode by 3^s
    let lap = fractional_laplacian(&f, 0.5)?;
    println!("‖f‖₂ = {:.6}, ‖Λ^½ f‖₂ = {:.6}", f.l2_norm(), lap.l2_norm());

    let u = velocity(&f, 0.3)?;
    println!("max |∇·u| in spectral space = {:e}", u.max_spectral_divergence());
    println!("‖u‖∞ = {:.6}, ‖∇f‖∞ = {:.6}", u.linf_norm(), gradient(&f).linf_norm());

    let noisy = ScalarField2D::from_fn(&grid, |x, y| f.at(0, 0) + (30.0 * x).sin() * y.cos());
    println!("2/3 dealiasing keeps ‖·‖₂ = {:.6} of {:.6}", dealias(&noisy, 2.0 / 3.0).l2_norm(), noisy.l2_norm());

    let (lo, hi) = shell_index_range(&grid);
    for j in lo..=hi {
        let s = dyadic_shell_energy(&f, j);
        if s.energy > 0.0 {
            println!("shell {j}: {:?}", s);
        }
    }
    Ok(())
}
