//! Coefficient checks for the shrinking-head moduli in the supercritical range.

use gsqg::certify::{certify_eventual, eventual_bounds, CriterionConstants, EventualGrid, EventualParams};
use gsqg::moc::{vanish_time, Moc};

fn main() -> gsqg::Result<()> {
    let c = CriterionConstants::new(0.3, 0.9, 1.0);
    let (delta, gamma) = (0.1, 0.8);
    let b = eventual_bounds(&c, gamma);
    println!("bounds: C₁ < {:.4}, C₂ < {:.4}", b.c1, b.c2);

    for factor in [0.5, 10.0] {
        let p = EventualParams::from_c1(factor * b.c1, factor * b.c2, delta, gamma, &c);
        let cert = certify_eventual(&p, &c, &EventualGrid::default())?;
        println!("{factor}× bounds: {} (worst margin {:.3e})", cert.verdict, cert.worst_margin);
        for ineq in &cert.inequalities {
            println!("  {:<40} {}", ineq.name, ineq.verdict);
        }
    }

    let p = EventualParams::from_c1(0.5 * b.c1, 0.5 * b.c2, delta, gamma, &c);
    let t0 = vanish_time(delta, c.beta, p.c2)?;
    println!("head length vanishes at t = {t0:.4}");
    for t in [0.0, 0.5 * t0, t0] {
        let m = Moc::eventual_at(p.h, delta, gamma, c.beta, p.c2, t)?;
        println!("  t = {t:.4}: ω(δ/100) = {:.5}", m.value(delta / 100.0));
    }
    Ok(())
}
