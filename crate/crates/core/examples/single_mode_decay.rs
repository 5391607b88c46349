//! A single Fourier mode is an exact solution: the velocity it induces is
//! parallel to its level sets, so only the dissipation acts.

use gsqg::evolution::{SolverParams, Stepper};
use gsqg::spectral::{Grid2D, ScalarField2D};

fn main() -> gsqg::Result<()> {
    let grid = Grid2D::periodic(64)?;
    let params = SolverParams {
        alpha: 0.3,
        beta: 1.5,
        nu: 1.0,
        dt: 1e-4,
        t_end: 0.1,
        ..Default::default()
    };
    let stepper = Stepper::new(&grid, &params)?;
    let theta0 = ScalarField2D::from_fn(&grid, |x, y| (3.0 * x + 4.0 * y).cos());

    let end = stepper.run(&theta0, 0.02, |s| {
        let exact = (-5f64.powf(1.5) * s.t).exp();
        println!("t = {:.2}  Linf = {:.12}  exact = {:.12}", s.t, s.theta.linf_norm(), exact);
    })?;

    let decay = (-5f64.powf(1.5) * end.t).exp();
    let exact = ScalarField2D::from_fn(&grid, |x, y| decay * (3.0 * x + 4.0 * y).cos());
    println!("max error at t = {}: {:e}", end.t, end.theta.sub(&exact)?.linf_norm());
    Ok(())
}
