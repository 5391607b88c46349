//! Grid-certify the breakdown inequality for the explicit subcritical modulus,
//! then break it by inflating the tail slope.

use gsqg::certify::{certify_subcritical, subcritical_thresholds, CriterionConstants, SubcriticalGrid};
use gsqg::moc::Moc;

fn main() -> gsqg::Result<()> {
    let grid = SubcriticalGrid::default();
    for (alpha, beta) in [(0.1, 1.3), (0.3, 1.6), (0.5, 1.8)] {
        let c = CriterionConstants::new(alpha, beta, 1.0);
        let delta = subcritical_thresholds(&c, 1.0)?.delta / 2.0;
        let gamma = subcritical_thresholds(&c, delta)?.gamma / 2.0;

        let good = certify_subcritical(&Moc::kisel_nv(delta, gamma, beta)?, &c, &grid)?;
        let bad = certify_subcritical(&Moc::kisel_nv(delta, 100.0 * gamma, beta)?, &c, &grid)?;
        println!(
            "α = {alpha}, β = {beta}: δ = {delta:.3e}, γ = {gamma:.3e} → {} over {} points; 100γ → {} at ξ = {:.3e}",
            good.verdict, good.grid.points, bad.verdict, bad.witness_xi
        );
        if let Some(r) = &bad.reason {
            println!("  reason: {r}");
        }
    }
    Ok(())
}
