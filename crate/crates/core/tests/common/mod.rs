//! Brute-force reference values, written without the library's quadrature or
//! piecewise machinery.
#![allow(dead_code)]

/// A modulus given by closed forms for its value and second derivative.
pub struct RefMoc {
    pub value: Box<dyn Fn(f64) -> f64>,
    pub curvature: Box<dyn Fn(f64) -> f64>,
    /// Points where the second derivative jumps.
    pub kinks: Vec<f64>,
}

impl RefMoc {
    pub fn power(coef: f64, exponent: f64) -> RefMoc {
        RefMoc {
            value: Box::new(move |x| coef * x.powf(exponent)),
            curvature: Box::new(move |x| coef * exponent * (exponent - 1.0) * x.powf(exponent - 2.0)),
            kinks: vec![],
        }
    }

    /// `ξ − ξ^{3/2}` up to `δ`, then `ω′ = γ/(4(ξ + ξ^β))`, integrated via
    /// `∫ dη/(η(1 + η^{β−1})) = ln(v/(1 + v))/(β − 1)`, `v = η^{β−1}`.
    pub fn linear_three_halves_with_tail(delta: f64, gamma: f64, beta: f64) -> RefMoc {
        assert!(beta > 1.0);
        let head = move |x: f64| x - x.powf(1.5);
        let prim = move |x: f64| {
            let v = x.powf(beta - 1.0);
            (v / (1.0 + v)).ln() / (beta - 1.0)
        };
        RefMoc {
            value: Box::new(move |x| {
                if x <= delta {
                    head(x)
                } else {
                    head(delta) + gamma / 4.0 * (prim(x) - prim(delta))
                }
            }),
            curvature: Box::new(move |x| {
                if x <= delta {
                    -0.75 / x.sqrt()
                } else {
                    -gamma / 4.0 * (1.0 + beta * x.powf(beta - 1.0)) / (x + x.powf(beta)).powi(2)
                }
            }),
            kinks: vec![delta],
        }
    }

    fn w(&self, x: f64) -> f64 {
        (self.value)(x)
    }
}

/// Midpoint sum of `∫ f(a + σ·w·e^s)·w·e^s ds` over `s ∈ [−depth, 0]`, i.e. the
/// integral of `f` over the interval of length `w` starting at `a` and graded
/// towards `a` (`σ = ±1` picks the side).
fn graded(f: &dyn Fn(f64) -> f64, a: f64, w: f64, sign: f64, depth: f64, nodes: usize) -> f64 {
    let h = depth / nodes as f64;
    let mut sum = 0.0;
    for i in 0..nodes {
        let s = -depth + (i as f64 + 0.5) * h;
        let d = w * s.exp();
        sum += f(a + sign * d) * d;
    }
    sum * h
}

/// Midpoint sum over `η = ξ e^s`, `s ∈ [0, depth]`.
fn outward(f: &dyn Fn(f64) -> f64, xi: f64, depth: f64, nodes: usize) -> f64 {
    let h = depth / nodes as f64;
    let mut sum = 0.0;
    for i in 0..nodes {
        let e = xi * ((i as f64 + 0.5) * h).exp();
        sum += f(e) * e;
    }
    sum * h
}

/// Second difference `ω(ξ+2η) + ω(ξ−2η) − 2ω(ξ)`, replaced by `4ω″(ξ)η²`
/// once rounding would swamp it and no kink is in reach.
fn second_difference(m: &RefMoc, xi: f64, eta: f64) -> f64 {
    let near_kink = m.kinks.iter().any(|&k| (k - xi).abs() <= 2.0 * eta);
    if 2.0 * eta < 3e-4 * xi && !near_kink {
        4.0 * (m.curvature)(xi) * eta * eta
    } else {
        m.w(xi + 2.0 * eta) + m.w(xi - 2.0 * eta) - 2.0 * m.w(xi)
    }
}

/// Dissipation functional with `c_β = 1`, from 10⁶ midpoint nodes.
pub fn upsilon_oracle(m: &RefMoc, xi: f64, beta: f64) -> f64 {
    const NODES: usize = 250_000;
    let near = |eta: f64| second_difference(m, xi, eta) / eta.powf(1.0 + beta);
    let far = |eta: f64| (m.w(2.0 * eta + xi) - m.w(2.0 * eta - xi) - 2.0 * m.w(xi)) / eta.powf(1.0 + beta);
    let head_depth = 25.0 / (2.0 - beta).max(0.05);
    let tail_depth = 25.0 / beta;
    graded(&near, 0.0, xi / 4.0, 1.0, head_depth, NODES)
        + graded(&near, xi / 2.0, xi / 4.0, -1.0, 40.0, NODES)
        + graded(&far, xi / 2.0, xi / 2.0, 1.0, 40.0, NODES)
        + outward(&far, xi, tail_depth, NODES)
}

/// Drift bound with `c_α = 1`, from 10⁶ midpoint nodes. `ω` grows like
/// `η^head` at the origin and like `η^tail` at infinity.
pub fn omega1_oracle(m: &RefMoc, xi: f64, alpha: f64, head: f64, tail: f64) -> f64 {
    const NODES: usize = 500_000;
    let inner = |eta: f64| m.w(eta) / eta.powf(1.0 + alpha);
    let outer = |eta: f64| m.w(eta) / eta.powf(2.0 + alpha);
    graded(&inner, 0.0, xi, 1.0, 30.0 / (head - alpha), NODES)
        + xi * outward(&outer, xi, 30.0 / (1.0 + alpha - tail), NODES)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}
