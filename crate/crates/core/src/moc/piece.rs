use serde::{Deserialize, Serialize};

/// Closed-form descriptor for one piece of a modulus of continuity.
///
/// Every variant can evaluate its value, first and second derivative, an
/// accurate increment `ω(x + h) − ω(x)`, and an inverse on its own interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    /// `coef · x^exponent`
    Power { coef: f64, exponent: f64 },
    /// `slope · x + intercept`
    Affine { slope: f64, intercept: f64 },
    /// `x − x^{3/2}`
    LinearThreeHalves,
    /// Slowly saturating tail with `ω′(x) = γ / (4(x + x^β))`, anchored at
    /// `ω(start) = start_value`.
    SlowTail {
        gamma: f64,
        beta: f64,
        start: f64,
        start_value: f64,
    },
    Constant(f64),
}

const UNIT_BETA: f64 = 1e-12;

/// `(x + h)^p − x^p` without cancellation.
fn power_increment(x: f64, h: f64, p: f64) -> f64 {
    if x == 0.0 {
        return h.powf(p);
    }
    x.powf(p) * (p * (h / x).ln_1p()).exp_m1()
}

/// `(x + h)^p + (x − h)^p − 2x^p` for `0 ≤ h ≤ x`, summing the even binomial
/// terms when `h/x` is small so the linear parts cancel exactly.
fn power_second_difference(x: f64, h: f64, p: f64) -> f64 {
    let u = h / x;
    if u > 0.1 {
        return power_increment(x, h, p) + power_increment(x, -h, p);
    }
    let (mut c, mut sum, u2) = (1.0, 0.0, u * u);
    let mut term_pow = 1.0;
    for k in 1..=40 {
        c *= (p - (k - 1) as f64) / k as f64;
        if k % 2 == 1 {
            continue;
        }
        term_pow *= u2;
        let t = c * term_pow;
        sum += t;
        if t.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    2.0 * x.powf(p) * sum
}

impl Piece {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            Piece::Power { coef, exponent } => coef * x.powf(exponent),
            Piece::Affine { slope, intercept } => slope * x + intercept,
            Piece::LinearThreeHalves => x - x * x.sqrt(),
            Piece::SlowTail {
                gamma,
                beta,
                start,
                start_value,
            } => start_value + self.tail_increment(start, x - start, gamma, beta),
            Piece::Constant(h) => h,
        }
    }

    pub fn d1(&self, x: f64) -> f64 {
        match *self {
            Piece::Power { coef, exponent } => coef * exponent * x.powf(exponent - 1.0),
            Piece::Affine { slope, .. } => slope,
            Piece::LinearThreeHalves => 1.0 - 1.5 * x.sqrt(),
            Piece::SlowTail { gamma, beta, .. } => gamma / (4.0 * (x + x.powf(beta))),
            Piece::Constant(_) => 0.0,
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        match *self {
            Piece::Power { coef, exponent } => {
                coef * exponent * (exponent - 1.0) * x.powf(exponent - 2.0)
            }
            Piece::Affine { .. } | Piece::Constant(_) => 0.0,
            Piece::LinearThreeHalves => -0.75 / x.sqrt(),
            Piece::SlowTail { gamma, beta, .. } => {
                let s = x + x.powf(beta);
                -gamma * (1.0 + beta * x.powf(beta - 1.0)) / (4.0 * s * s)
            }
        }
    }

    /// `value(x + h) − value(x)`, accurate when `|h| ≪ x`.
    pub fn increment(&self, x: f64, h: f64) -> f64 {
        match *self {
            Piece::Power { coef, exponent } => coef * power_increment(x, h, exponent),
            Piece::Affine { slope, .. } => slope * h,
            Piece::LinearThreeHalves => h - power_increment(x, h, 1.5),
            Piece::SlowTail { gamma, beta, .. } => self.tail_increment(x, h, gamma, beta),
            Piece::Constant(_) => 0.0,
        }
    }

    /// `value(x + h) + value(x − h) − 2 value(x)` for `0 ≤ h ≤ x` with both
    /// points on this piece.
    pub fn second_difference(&self, x: f64, h: f64) -> f64 {
        match *self {
            Piece::Power { coef, exponent } => coef * power_second_difference(x, h, exponent),
            Piece::LinearThreeHalves => -power_second_difference(x, h, 1.5),
            Piece::Affine { .. } | Piece::Constant(_) => 0.0,
            Piece::SlowTail { .. } => self.increment(x, h) + self.increment(x, -h),
        }
    }

    fn tail_increment(&self, x: f64, h: f64, gamma: f64, beta: f64) -> f64 {
        let q = 1.0 - beta;
        if q.abs() < UNIT_BETA {
            return gamma / 8.0 * (h / x).ln_1p();
        }
        // ω(x) = const − k·ln(1 + x^q), k = γ/(4(β − 1))
        let k = gamma / (4.0 * (beta - 1.0));
        let dq = power_increment(x, h, q);
        -k * (dq / (1.0 + x.powf(q))).ln_1p()
    }

    /// Limit of the piece's value as `x → ∞` (may be infinite).
    pub fn limit_at_infinity(&self) -> f64 {
        match *self {
            Piece::Constant(h) => h,
            Piece::Affine { slope: 0.0, intercept } => intercept,
            Piece::SlowTail {
                gamma,
                beta,
                start,
                start_value,
            } if beta > 1.0 + UNIT_BETA => {
                let k = gamma / (4.0 * (beta - 1.0));
                start_value + k * start.powf(1.0 - beta).ln_1p()
            }
            _ => f64::INFINITY,
        }
    }

    /// Smallest `x ∈ [lo, hi]` with `value(x) = y`, assuming `y` lies in the
    /// piece's range over that interval.
    pub fn inverse(&self, y: f64, lo: f64, hi: f64) -> f64 {
        match *self {
            Piece::Power { coef, exponent } => (y / coef).powf(1.0 / exponent),
            Piece::Affine { slope, intercept } => {
                if slope == 0.0 {
                    lo
                } else {
                    (y - intercept) / slope
                }
            }
            Piece::Constant(_) => lo,
            Piece::SlowTail {
                gamma,
                beta,
                start,
                start_value,
            } => {
                let q = 1.0 - beta;
                if q.abs() < UNIT_BETA {
                    return start * (8.0 * (y - start_value) / gamma).exp();
                }
                let k = gamma / (4.0 * (beta - 1.0));
                let r = start.powf(q).ln_1p() - (y - start_value) / k;
                r.exp_m1().powf(1.0 / q)
            }
            Piece::LinearThreeHalves => self.solve_monotone(y, lo, hi),
        }
    }

    /// Safeguarded Newton iteration on an increasing piece.
    fn solve_monotone(&self, y: f64, lo: f64, hi: f64) -> f64 {
        let (mut a, mut b) = (lo, hi);
        let mut x = 0.5 * (a + b);
        for _ in 0..200 {
            let r = self.value(x) - y;
            if r == 0.0 {
                return x;
            }
            if r > 0.0 {
                b = x;
            } else {
                a = x;
            }
            let d = self.d1(x);
            let newton = x - r / d;
            x = if d > 0.0 && newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
            if (b - a) <= 4.0 * f64::EPSILON * b.abs() {
                break;
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pieces() -> Vec<Piece> {
        vec![
            Piece::Power {
                coef: 2.0,
                exponent: 0.6,
            },
            Piece::Affine {
                slope: 0.3,
                intercept: 0.1,
            },
            Piece::LinearThreeHalves,
            Piece::SlowTail {
                gamma: 0.01,
                beta: 1.6,
                start: 0.05,
                start_value: 0.04,
            },
            Piece::SlowTail {
                gamma: 0.01,
                beta: 1.0,
                start: 0.05,
                start_value: 0.04,
            },
        ]
    }

    #[test]
    fn increments_agree_with_value_differences() {
        for p in pieces() {
            for &(x, h) in &[(0.1, 0.02), (0.1, -0.03), (0.07, 1e-3)] {
                let direct = p.value(x + h) - p.value(x);
                let inc = p.increment(x, h);
                assert!((direct - inc).abs() < 1e-14, "{p:?} {x} {h}");
            }
        }
    }

    #[test]
    fn second_difference_matches_taylor() {
        for p in pieces() {
            let x = 0.09;
            let h = 1e-7 * x;
            let expect = p.d2(x) * h * h;
            let got = p.second_difference(x, h);
            assert!((got - expect).abs() <= 1e-6 * expect.abs() + 1e-30, "{p:?} {got} {expect}");
            let h = 0.05;
            let direct = p.value(x + h) + p.value(x - h) - 2.0 * p.value(x);
            assert!((p.second_difference(x, h) - direct).abs() < 1e-14, "{p:?}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for p in pieces() {
            let x = 0.09;
            let h = 1e-6;
            let fd1 = (p.value(x + h) - p.value(x - h)) / (2.0 * h);
            let fd2 = (p.d1(x + h) - p.d1(x - h)) / (2.0 * h);
            assert!((fd1 - p.d1(x)).abs() < 1e-7 * p.d1(x).abs().max(1.0), "{p:?}");
            assert!((fd2 - p.d2(x)).abs() < 1e-5 * p.d2(x).abs().max(1.0), "{p:?}");
        }
    }

    #[test]
    fn inverse_round_trips() {
        for p in pieces() {
            for &x in &[0.06, 0.1, 0.2] {
                let y = p.value(x);
                let back = p.inverse(y, 0.05, 0.3);
                assert!((back - x).abs() < 1e-12 * x, "{p:?} {x} {back}");
            }
        }
    }
}
