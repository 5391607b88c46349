//! Exponent bookkeeping of the Besov regularity bootstrap.

use gsqg::certify::regularity_ladder;
use gsqg::Error;

fn main() -> gsqg::Result<()> {
    let l = regularity_ladder(0.5, 1.2, 0.4, 40.0)?;
    for (i, s) in l.sigmas.iter().enumerate() {
        println!("σ_{} = {s:.4}", i + 1);
    }
    println!("first rung above 1: N₀ = {}, p₁ = {:.3}, p₂ = {:.3}", l.n0, l.p1, l.p2);

    match regularity_ladder(0.5, 1.2, 0.4, l.p2) {
        Err(Error::LadderStall { min_p, .. }) => println!("p = p₂ stalls; need p > {min_p:.3}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
