//! Fit the L∞ decay constant on early samples and watch the envelope ratio.

use gsqg::diagnostics::{DecayMonitor, Tracker};
use gsqg::evolution::{InitialData, SolverParams, Stepper};
use gsqg::pairs::PairPlan;
use gsqg::spectral::Grid2D;

fn main() -> gsqg::Result<()> {
    let grid = Grid2D::periodic(64)?;
    let theta0 = InitialData::GaussianBump {
        center: [3.0, 3.0],
        width: 0.6,
        amplitude: 1.0,
    }
    .build(&grid)?;
    let params = SolverParams {
        alpha: 0.3,
        beta: 1.6,
        dt: 1e-3,
        t_end: 2.0,
        ..Default::default()
    };
    let stepper = Stepper::new(&grid, &params)?;
    let mut tracker = Tracker::new(PairPlan::default()).with_decay(DecayMonitor { beta: 1.6, t_fit: 0.2 })?;
    let mut rows = Vec::new();
    stepper.run(&theta0, 0.1, |s| rows.push(tracker.record(s)))?;
    for r in rows {
        let r = r?;
        match r.decay_envelope_ratio {
            Some(q) => println!("t = {:.1}  Linf = {:.5}  Linf/envelope = {q:.4}", r.t, r.linf),
            None => println!("t = {:.1}  Linf = {:.5}", r.t, r.linf),
        }
    }
    if let Some(fit) = tracker.decay_fit() {
        println!("fitted C = {:.4} (rms residual {:.2e})", fit.c, fit.rms_residual);
    }
    Ok(())
}
