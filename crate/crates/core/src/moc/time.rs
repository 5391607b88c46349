use super::Moc;
use crate::error::{domain, Result};

fn check(delta: f64, beta: f64, c2: f64) -> Result<()> {
    if !(delta > 0.0 && beta > 0.0 && c2 > 0.0) {
        return domain(format!(
            "need delta, beta, C2 > 0; got {delta}, {beta}, {c2}"
        ));
    }
    Ok(())
}

/// Time `δ^β/(C₂β)` at which the shrinking head length reaches zero.
pub fn vanish_time(delta: f64, beta: f64, c2: f64) -> Result<f64> {
    check(delta, beta, c2)?;
    Ok(delta.powf(beta) / (c2 * beta))
}

/// Solution `(δ^β − C₂βt)^{1/β}` of `ξ₀′ = −C₂ ξ₀^{1−β}`, `ξ₀(0) = δ`.
pub fn xi0_of_t(delta: f64, beta: f64, c2: f64, t: f64) -> Result<f64> {
    let t0 = vanish_time(delta, beta, c2)?;
    if !(t >= 0.0) || t > t0 {
        return domain(format!("t = {t} outside [0, {t0}]"));
    }
    if t == 0.0 {
        return Ok(delta);
    }
    let db = delta.powf(beta);
    let base = db - c2 * beta * t;
    if base <= 4.0 * f64::EPSILON * db {
        return Ok(0.0);
    }
    Ok(base.powf(1.0 / beta))
}

impl Moc {
    /// The eventual-regularity modulus at time `t`; at the vanishing time it
    /// degenerates to the stationary Hölder profile.
    pub fn eventual_at(h: f64, delta: f64, gamma: f64, beta: f64, c2: f64, t: f64) -> Result<Moc> {
        let xi0 = xi0_of_t(delta, beta, c2, t)?;
        if xi0 == 0.0 {
            Moc::stationary_holder(h, delta, gamma)
        } else {
            Moc::eventual(h, delta, gamma, xi0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        let (d, b, c) = (0.1, 0.9, 0.3);
        assert_eq!(xi0_of_t(d, b, c, 0.0).unwrap(), d);
        let t0 = vanish_time(d, b, c).unwrap();
        assert_eq!(xi0_of_t(d, b, c, t0).unwrap(), 0.0);
        assert!(xi0_of_t(d, b, c, t0 * 1.01).is_err());
        assert!(Moc::eventual_at(1.0, d, 0.8, b, c, t0).unwrap().label() == "stationary_holder");
    }

    #[test]
    fn satisfies_the_ode() {
        let (d, b, c) = (0.2, 0.9, 0.5);
        let t = vanish_time(d, b, c).unwrap() / 2.0;
        let h = 1e-7;
        let fd = (xi0_of_t(d, b, c, t + h).unwrap() - xi0_of_t(d, b, c, t - h).unwrap()) / (2.0 * h);
        let rhs = -c * xi0_of_t(d, b, c, t).unwrap().powf(1.0 - b);
        assert!((fd - rhs).abs() < 1e-6, "{fd} vs {rhs}");
    }
}
