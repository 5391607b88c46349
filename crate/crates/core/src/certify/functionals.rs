//! The dissipation functional `Υ_β` and the drift bound `Ω₁` of a modulus.
//!
//! Both are singular integrals. The second difference in the first `Υ_β`
//! integral is formed from accurate piecewise increments, and on a short
//! interval `]0, η_c]` its Taylor expansion `4ω″(ξ)η²` is integrated exactly.
//! Tails of eventually-constant moduli are summed in closed form.

use crate::error::{domain, Error, Result};
use crate::moc::{Moc, Piece, Side};
use crate::quadrature::{
    integrate_from_zero, integrate_to_infinity, integrate_with_breaks, Estimate, Tolerance,
};

const REL_TOL: f64 = 1e-10;
const HEAD_FRACTION: f64 = 1e-6;
/// Non-converged estimates are still accepted below this relative error.
const ACCEPT_REL: f64 = 1e-8;

/// `∫_a^b f` in the variable `s = ln η`.
fn integrate_log<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], tol: Tolerance) -> Estimate {
    let sb: Vec<f64> = breaks
        .iter()
        .filter(|&&p| p > a && p < b)
        .map(|p| p.ln())
        .collect();
    integrate_with_breaks(
        |s: f64| {
            let e = s.exp();
            f(e) * e
        },
        a.ln(),
        b.ln(),
        &sb,
        tol,
    )
}

fn accept(e: Estimate, scale: f64) -> Result<Estimate> {
    if !e.value.is_finite() && e.value != f64::NEG_INFINITY {
        return Err(Error::Quadrature {
            estimate: e.value,
            error: e.error,
        });
    }
    if e.converged || e.error <= ACCEPT_REL * e.value.abs().max(scale) {
        Ok(e)
    } else {
        Err(Error::Quadrature {
            estimate: e.value,
            error: e.error,
        })
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if xi > 0.0 && xi.is_finite() {
        Ok(())
    } else {
        domain(format!("ξ = {xi} must be positive and finite"))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 2.0 {
        Ok(())
    } else {
        domain(format!(
            "β = {beta} outside ]0, 2[; the dissipation functional is not defined by these integrals at β = 2"
        ))
    }
}

/// `c_β · [∫₀^{ξ/2} (ω(ξ+2η) + ω(ξ−2η) − 2ω(ξ))/η^{1+β} dη
///        + ∫_{ξ/2}^∞ (ω(2η+ξ) − ω(2η−ξ) − 2ω(ξ))/η^{1+β} dη]`.
///
/// Refused for non-concave moduli, whose integrands lose their sign.
pub fn upsilon_beta(moc: &Moc, xi: f64, beta: f64, c_beta: f64) -> Result<Estimate> {
    check_xi(xi)?;
    check_beta(beta)?;
    moc.check_concave()?;
    Ok(upsilon_unchecked(moc, xi, beta)?.scale(c_beta))
}

/// `Υ_β / c_β` without the concavity gate.
pub(crate) fn upsilon_unchecked(moc: &Moc, xi: f64, beta: f64) -> Result<Estimate> {
    let scale = moc.value(xi).max(f64::MIN_POSITIVE) * xi.powf(-beta);
    let tol = Tolerance::new(1e-15 * scale, REL_TOL);
    let bps = moc.breakpoints();
    let near = first_integral(moc, xi, beta, &bps, tol);
    if near.value == f64::NEG_INFINITY {
        return Ok(near);
    }
    let far = second_integral(moc, xi, beta, &bps, tol);
    accept(near + far, scale)
}

fn first_integral(moc: &Moc, xi: f64, beta: f64, bps: &[f64], tol: Tolerance) -> Estimate {
    let quarter = 0.25 * xi;
    let half = 0.5 * xi;
    let g = |eta: f64| {
moc.second_difference(xi, 2.0 * eta) / eta.powf(1.0 + beta)
    };
    let kinks: Vec<f64> = bps
        .iter()
        .map(|&b| 0.5 * (xi - b).abs())
        .filter(|&e| e > 0.0 && e < half)
        .collect();
    let on_break = bps.contains(&xi);

    let (head, inner) = if on_break {
        let jump = moc.slope(xi, Side::Right) - moc.slope(xi, Side::Left);
        if jump != 0.0 && beta >= 1.0 {
            return Estimate::exact(f64::NEG_INFINITY);
        }
        (Estimate::ZERO, integrate_from_zero(g, quarter, &kinks, tol))
    } else {
        let nearest = bps
            .iter()
            .map(|&b| 0.5 * (xi - b).abs())
            .fold(f64::INFINITY, f64::min);
        let eta_c = (HEAD_FRACTION * xi).min(0.5 * nearest);
        let head = 4.0 * moc.curvature(xi) * eta_c.powf(2.0 - beta) / (2.0 - beta);
        (Estimate::exact(head), integrate_log(g, eta_c, quarter, &kinks, tol))
    };
    // ]ξ/4, ξ/2] in v = ξ/2 − η resolves the endpoint where ξ − 2η → 0
    let vk: Vec<f64> = kinks
        .iter()
        .filter(|&&e| e > quarter)
        .map(|&e| half - e)
        .collect();
    let outer = integrate_from_zero(|v: f64| g(half - v), quarter, &vk, tol);
    head + inner + outer
}

fn second_integral(moc: &Moc, xi: f64, beta: f64, bps: &[f64], tol: Tolerance) -> Estimate {
    // v = 2η − ξ; dη/η^{1+β} = 2^β dv/(v + ξ)^{1+β}
    let w0 = moc.value(xi);
    let weight = 2f64.powf(beta);
    let f = |v: f64| (moc.increment(v, 2.0 * xi) - 2.0 * w0) * weight / (v + xi).powf(1.0 + beta);
    let vb: Vec<f64> = bps
        .iter()
        .flat_map(|&b| [b, b - 2.0 * xi])
        .filter(|&v| v > 0.0)
        .collect();
    let head = integrate_from_zero(f, xi, &vb, tol);
    match moc.constant_beyond() {
        Some(c) => {
            let upper = c.max(xi);
            let mid = if upper > xi {
                integrate_log(f, xi, upper, &vb, tol)
            } else {
                Estimate::ZERO
            };
            let tail = -2.0 * w0 * weight * (upper + xi).powf(-beta) / beta;
            head + mid + Estimate::exact(tail)
        }
        None => head + integrate_to_infinity(f, xi, &vb, tol),
    }
}

/// Reject moduli for which `∫₀ ω(η)/η^{1+α}` diverges.
fn check_integrable_at_origin(moc: &Moc, alpha: f64) -> Result<()> {
    if moc.value_at_origin() > 0.0 {
        return Err(Error::Divergent(format!(
            "ω(0+) = {:e} > 0 makes ∫₀ ω(η)/η^(1+α) dη infinite",
            moc.value_at_origin()
        )));
    }
    if let Piece::Power { exponent, .. } = moc.pieces()[0] {
        if exponent <= alpha {
            return Err(Error::Divergent(format!(
                "ω ~ η^{exponent} at the origin is not integrable against η^-(1+{alpha})"
            )));
        }
    }
    Ok(())
}

/// `c_α · [∫₀^ξ ω(η)/η^{1+α} dη + ξ ∫_ξ^∞ ω(η)/η^{2+α} dη]`.
pub fn omega1(moc: &Moc, xi: f64, alpha: f64, c_alpha: f64) -> Result<Estimate> {
    check_xi(xi)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("α = {alpha} must lie in ]0, 1["));
    }
    check_integrable_at_origin(moc, alpha)?;
    Ok(omega1_unchecked(moc, xi, alpha)?.scale(c_alpha))
}

pub(crate) fn omega1_unchecked(moc: &Moc, xi: f64, alpha: f64) -> Result<Estimate> {
    let scale = moc.value(xi).max(f64::MIN_POSITIVE) * xi.powf(-alpha);
    let tol = Tolerance::new(1e-15 * scale, REL_TOL);
    let bps = moc.breakpoints();
    let near = integrate_from_zero(|e: f64| moc.value(e) / e * e.powf(-alpha), xi, &bps, tol);
    let g = |e: f64| moc.value(e) / e.powf(2.0 + alpha);
    let far = match moc.constant_beyond() {
        Some(c) => {
            let upper = c.max(xi);
            let mid = if upper > xi {
                integrate_log(g, xi, upper, &bps, tol)
            } else {
                Estimate::ZERO
            };
            let h = moc.sup();
            mid + Estimate::exact(h * upper.powf(-1.0 - alpha) / (1.0 + alpha))
        }
        None => integrate_to_infinity(g, xi, &bps, tol),
    };
    accept(near + far.scale(xi), scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn linear_modulus_has_no_dissipation() {
        let m = Moc::power(1.0, 1.0).unwrap();
        // ω linear: first integrand vanishes; second is −2ω(ξ)+2ξ... = 0 too
        let e = upsilon_beta(&m, 0.7, 1.3, 1.0).unwrap();
        assert!(e.value.abs() < 1e-12, "{e:?}");
    }

    #[test]
    fn constant_modulus_closed_form() {
        let h = 2.5;
        let m = Moc::constant(h).unwrap();
        for &(beta, xi) in &[(0.5, 0.1), (1.3, 2.0), (1.9, 1e-3)] {
            let e = upsilon_beta(&m, xi, beta, 1.0).unwrap();
            let exact = -2f64.powf(1.0 + beta) * h / (beta * xi.powf(beta));
            assert!(rel(e.value, exact) < 1e-12, "{beta} {xi}: {e:?} vs {exact}");
        }
    }

    #[test]
    fn power_modulus_drift_closed_form() {
        let (g, a) = (0.7, 0.3);
        let m = Moc::power(1.0, g).unwrap();
        for xi in [1e-3, 0.5, 40.0] {
            let e = omega1(&m, xi, a, 1.0).unwrap();
            let exact = xi.powf(g - a) * (1.0 / (g - a) + 1.0 / (1.0 + a - g));
            assert!(rel(e.value, exact) < 1e-10, "{xi}");
        }
    }

    #[test]
    fn refusals() {
        let ev = Moc::eventual(1.0, 0.1, 0.5, 0.01).unwrap();
        assert!(matches!(omega1(&ev, 0.05, 0.3, 1.0), Err(Error::Divergent(_))));
        let st = Moc::stationary_holder(1.0, 0.1, 0.2).unwrap();
        assert!(matches!(omega1(&st, 0.05, 0.3, 1.0), Err(Error::Divergent(_))));
        let bad = Moc::kisel_nv(0.01, 1.0, 1.6).unwrap();
        assert!(matches!(upsilon_beta(&bad, 0.05, 1.6, 1.0), Err(Error::NotConcave(_))));
        let ok = Moc::power(1.0, 0.5).unwrap();
        assert!(upsilon_beta(&ok, 0.05, 2.0, 1.0).is_err());
        assert!(upsilon_beta(&ok, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn jump_in_slope_at_the_point_gives_minus_infinity() {
        let m = Moc::kisel_nv(0.01, 0.001, 1.6).unwrap();
        let e = upsilon_beta(&m, 0.01, 1.6, 1.0).unwrap();
        assert_eq!(e.value, f64::NEG_INFINITY);
        let near = upsilon_beta(&m, 0.01 * (1.0 + 1e-12), 1.6, 1.0).unwrap();
        assert!(near.value.is_finite() && near.value < 0.0);
    }
}
