//! The built-in moduli of continuity and their basic properties.

use gsqg::moc::{Moc, Side};

fn show(m: &Moc) -> gsqg::Result<()> {
    println!("{} (concave: {})", m.label(), m.is_concave());
    for xi in [1e-4, 1e-2, 0.1, 1.0, 100.0] {
        println!(
            "  ξ = {xi:<8e} ω = {:<12.6e} ω′(ξ+) = {:<12.6e} ω″ = {:.6e}",
            m.value(xi),
            m.slope(xi, Side::Right),
            m.curvature(xi)
        );
    }
    for note in m.notes() {
        println!("  note: {note}");
    }
    Ok(())
}

fn main() -> gsqg::Result<()> {
    show(&Moc::kisel_nv(0.01, 0.001, 1.6)?)?;
    show(&Moc::stationary_holder(2.0, 0.5, 0.3)?)?;
    show(&Moc::eventual(2.0, 0.5, 0.8, 0.05)?)?;
    show(&Moc::power(1.0, 0.5)?)?;

    // the scaling that preserves the breakdown inequality
    let base = Moc::kisel_nv(0.01, 0.001, 1.6)?;
    let scaled = base.scale(10.0, 0.3, 1.6)?;
    println!("ω_λ(0.001) = {:.6e} at λ = 10", scaled.value(1e-3));

    // a modulus that violates concavity is caught
    let bent = Moc::kisel_nv(0.5, 0.1, 1.6)?;
    println!("δ = 0.5: {:?}", bent.check_concave().err().map(|e| e.to_string()));
    Ok(())
}
