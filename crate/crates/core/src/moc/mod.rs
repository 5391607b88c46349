//! Moduli of continuity: increasing, concave, piecewise-`C²` functions on
//! `]0, ∞[` built from closed-form pieces.
//!
//! A [`Moc`] stores its pieces in raw coordinates together with a global
//! amplitude `a` and dilation `λ`, and evaluates `a · ω_raw(λξ)`. Rescaling
//! therefore never touches the pieces and composes exactly.

mod families;
mod obey;
mod piece;
mod tabulated;
mod time;

use serde::Serialize;

use crate::error::{domain, Error, Result};

pub use families::MocFamily;
pub use obey::{obeys, obeys_fn, ObedienceReport};
pub use piece::Piece;
pub use tabulated::read_tabulated_csv;
pub use time::{vanish_time, xi0_of_t};

/// Which one-sided limit to take at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Behaviour at the origin, recorded per instance.
///
/// At least one of the three is required by the breakdown criterion:
/// a jump at the origin, an infinite slope, or an infinitely negative
/// curvature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OriginConditions {
    /// `ω(0+) > 0`
    pub positive_at_origin: bool,
    /// `ω′(0+) = ∞`
    pub infinite_slope: bool,
    /// `ω″(0+) = −∞`
    pub infinite_curvature: bool,
}

impl OriginConditions {
    pub fn any(&self) -> bool {
        self.positive_at_origin || self.infinite_slope || self.infinite_curvature
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Moc {
    label: String,
    pieces: Vec<Piece>,
    /// Right endpoints of all pieces but the last, in raw coordinates.
    breaks: Vec<f64>,
    amplitude: f64,
    dilation: f64,
    approximate: bool,
    notes: Vec<String>,
}

impl Moc {
    /// Assemble a modulus from pieces. Piece `i` covers `]breaks[i−1], breaks[i]]`
    /// and the last piece extends to infinity.
    pub fn from_pieces(label: impl Into<String>, pieces: Vec<Piece>, breaks: Vec<f64>) -> Result<Self> {
        if pieces.is_empty() || breaks.len() + 1 != pieces.len() {
            return domain(format!(
                "{} pieces need {} breakpoints, got {}",
                pieces.len(),
                pieces.len().saturating_sub(1),
                breaks.len()
            ));
        }
        let mut prev = 0.0;
        for &b in &breaks {
            if !(b.is_finite() && b > prev) {
                return domain("breakpoints must be finite, positive and strictly increasing");
            }
            prev = b;
        }
        Ok(Moc {
            label: label.into(),
            pieces,
            breaks,
            amplitude: 1.0,
            dilation: 1.0,
            approximate: false,
            notes: Vec::new(),
        })
    }

    /// `ω(ξ) = coef · ξ^exponent` on the whole half line.
    pub fn power(coef: f64, exponent: f64) -> Result<Self> {
        if !(coef > 0.0 && exponent > 0.0 && exponent <= 1.0) {
            return domain(format!(
                "power modulus needs coef > 0 and exponent in ]0, 1], got {coef}, {exponent}"
            ));
        }
        Moc::from_pieces("power", vec![Piece::Power { coef, exponent }], vec![])
    }

    /// `ω ≡ h`.
    pub fn constant(h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return domain(format!("constant modulus needs h > 0, got {h}"));
        }
        Moc::from_pieces("constant", vec![Piece::Constant(h)], vec![])
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub(crate) fn mark_approximate(mut self) -> Self {
        self.approximate = true;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn dilation(&self) -> f64 {
        self.dilation
    }

    /// Set for moduli built from tabulated data.
    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    /// Parameter-domain remarks collected at construction (e.g. a concavity
    /// condition that is not met).
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Breakpoints in physical coordinates.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.breaks.iter().map(|b| b / self.dilation).collect()
    }

    /// Point beyond which the modulus is constant, if any.
    pub fn constant_beyond(&self) -> Option<f64> {
        match self.pieces.last() {
            Some(Piece::Constant(_)) => Some(self.breaks.last().map_or(0.0, |b| b / self.dilation)),
            _ => None,
        }
    }

    /// `ξ ↦ factor · ω(dilation · ξ)`, composed with the existing scaling.
    pub fn rescaled(&self, factor: f64, dilation: f64) -> Result<Self> {
        if !(factor > 0.0 && dilation > 0.0 && factor.is_finite() && dilation.is_finite()) {
            return domain(format!(
                "rescaling needs positive finite factors, got {factor}, {dilation}"
            ));
        }
        let mut out = self.clone();
        out.amplitude *= factor;
        out.dilation *= dilation;
        Ok(out)
    }

    /// The critical rescaling `λ^{β−α−1} ω(λξ)`.
    pub fn scale(&self, lambda: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return domain(format!("scaling parameter {lambda} must be positive"));
        }
        self.rescaled(lambda.powf(beta - alpha - 1.0), lambda)
    }

    fn piece_left(&self, x: f64) -> usize {
        self.breaks.partition_point(|&b| b < x)
    }

    fn piece_right(&self, x: f64) -> usize {
        self.breaks.partition_point(|&b| b <= x)
    }

    fn piece_bounds(&self, i: usize) -> (f64, f64) {
        let lo = if i == 0 { 0.0 } else { self.breaks[i - 1] };
        let hi = self.breaks.get(i).copied().unwrap_or(f64::INFINITY);
        (lo, hi)
    }

    fn raw_value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.pieces[0].value(0.0);
        }
        self.pieces[self.piece_left(x)].value(x)
    }

    /// `ω(ξ)` without the domain check; `ξ ≤ 0` yields `ω(0+)`.
    pub fn value(&self, xi: f64) -> f64 {
        self.amplitude * self.raw_value(self.dilation * xi)
    }

    pub fn eval(&self, xi: f64) -> Result<f64> {
        check_positive(xi)?;
        Ok(self.value(xi))
    }

    /// One-sided derivative without the domain check.
    pub fn slope(&self, xi: f64, side: Side) -> f64 {
        let x = self.dilation * xi;
        let i = match side {
            Side::Left => self.piece_left(x),
            Side::Right => self.piece_right(x),
        };
        self.amplitude * self.dilation * self.pieces[i].d1(x)
    }

    pub fn deriv(&self, xi: f64, side: Side) -> Result<f64> {
        check_positive(xi)?;
        Ok(self.slope(xi, side))
    }

    /// Second derivative; at a breakpoint the right-hand piece is used.
    pub fn curvature(&self, xi: f64) -> f64 {
        let x = self.dilation * xi;
        let d = self.dilation;
        self.amplitude * d * d * self.pieces[self.piece_right(x)].d2(x)
    }

    pub fn deriv2(&self, xi: f64) -> Result<f64> {
        check_positive(xi)?;
        Ok(self.curvature(xi))
    }

    /// Walks the pieces from `x` by the signed length `h`, handing each piece
    /// its own sub-length so that `h` is never recovered from a difference of
    /// positions.
    fn raw_increment(&self, x: f64, h: f64) -> f64 {
        let mut acc = 0.0;
        let mut a = x;
        let mut rem = h.abs();
        if h > 0.0 {
            let mut i = self.piece_right(x.max(0.0));
            while rem > 0.0 {
                let (_, end) = self.piece_bounds(i);
                let seg = if end - a < rem { end - a } else { rem };
                acc += self.pieces[i].increment(a, seg);
                rem -= seg;
                a = end;
                i += 1;
            }
        } else {
            let mut i = self.piece_left(x);
            while rem > 0.0 {
                let (start, _) = self.piece_bounds(i);
                let seg = if a - start < rem { a - start } else { rem };
                acc += self.pieces[i].increment(a, -seg);
                rem -= seg;
                if i == 0 {
                    break;
                }
                a = start;
                i -= 1;
            }
        }
        acc
    }

    /// `ω(ξ + h) − ω(ξ)` computed piecewise so that small `h` does not lose
    /// digits to cancellation.
    pub fn increment(&self, xi: f64, h: f64) -> f64 {
        if h == 0.0 {
            return 0.0;
        }
        self.amplitude * self.raw_increment(self.dilation * xi, self.dilation * h)
    }

    /// `ω(ξ + h) + ω(ξ − h) − 2ω(ξ)` for `0 ≤ h ≤ ξ`. When all three points
    /// share a piece the linear parts cancel analytically.
    pub fn second_difference(&self, xi: f64, h: f64) -> f64 {
        let (x, hh) = (self.dilation * xi, self.dilation * h);
        let i = self.piece_left(x);
        let (lo, hi) = self.piece_bounds(i);
        if x - hh > lo && x + hh <= hi {
            self.amplitude * self.pieces[i].second_difference(x, hh)
        } else {
            self.amplitude * (self.raw_increment(x, hh) + self.raw_increment(x, -hh))
        }
    }

    /// `ω(0+)`.
    pub fn value_at_origin(&self) -> f64 {
        self.amplitude * self.pieces[0].value(0.0)
    }

    /// `lim_{ξ→∞} ω(ξ)`, possibly infinite.
    pub fn sup(&self) -> f64 {
        self.amplitude * self.pieces.last().expect("non-empty").limit_at_infinity()
    }

    /// Smallest `ξ` with `ω(ξ) = y`. Returns `0` below `ω(0+)` and `∞` at or
    /// above an unattained supremum.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return domain(format!("inverse needs y ≥ 0, got {y}"));
        }
        let yr = y / self.amplitude;
        if yr <= self.pieces[0].value(0.0) {
            return Ok(0.0);
        }
        for (i, piece) in self.pieces.iter().enumerate() {
            let (lo, hi) = self.piece_bounds(i);
            let top = if hi.is_finite() {
                piece.value(hi)
            } else {
                piece.limit_at_infinity()
            };
            if hi.is_finite() && yr <= top {
                return Ok(piece.inverse(yr, lo, hi) / self.dilation);
            }
            if !hi.is_finite() && yr < top {
                let x = piece.inverse(yr, lo, hi);
                return Ok(x / self.dilation);
            }
        }
        Ok(f64::INFINITY)
    }

    pub fn origin_conditions(&self) -> OriginConditions {
        let first = self.pieces[0];
        let (infinite_slope, infinite_curvature) = match first {
            Piece::Power { exponent, .. } => (exponent < 1.0, exponent < 1.0),
            Piece::LinearThreeHalves => (false, true),
            _ => (false, false),
        };
        OriginConditions {
            positive_at_origin: self.value_at_origin() > 0.0,
            infinite_slope,
            infinite_curvature,
        }
    }

    /// Check monotonicity and concavity: per piece, at every breakpoint
    /// (continuity and `ω′(b−) ≥ ω′(b+)`), and on 200 log-spaced samples.
    pub fn check_concave(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::NotConcave(msg));
        for (i, p) in self.pieces.iter().enumerate() {
            let (lo, hi) = self.piece_bounds(i);
            let ok = match *p {
                Piece::Power { coef, exponent } => coef > 0.0 && exponent > 0.0 && exponent <= 1.0,
                Piece::Affine { slope, .. } => slope >= 0.0,
                Piece::LinearThreeHalves => hi <= 4.0 / 9.0,
                Piece::SlowTail { gamma, .. } => gamma > 0.0,
                Piece::Constant(_) => true,
            };
            if !ok {
                return fail(format!("piece {i} on ]{lo}, {hi}] is not increasing and concave"));
            }
        }
        for (i, &b) in self.breaks.iter().enumerate() {
            let (l, r) = (self.pieces[i], self.pieces[i + 1]);
            let (vl, vr) = (l.value(b), r.value(b));
            if (vl - vr).abs() > 1e-12 * vl.abs().max(1e-300) {
                return fail(format!("jump at breakpoint {}: {vl} vs {vr}", b / self.dilation));
            }
            let (dl, dr) = (l.d1(b), r.d1(b));
            if dl < dr * (1.0 - 1e-12) {
                return fail(format!(
                    "derivative increases across breakpoint {}: left {:e} < right {:e}",
                    b / self.dilation,
                    self.amplitude * self.dilation * dl,
                    self.amplitude * self.dilation * dr
                ));
            }
        }
        let (lo, hi) = self.sample_range();
        let mut prev = f64::INFINITY;
        for k in 0..200 {
            let xi = lo * (hi / lo).powf(k as f64 / 199.0);
            let d = self.slope(xi, Side::Right);
            if d < 0.0 || d > prev * (1.0 + 1e-12) {
                return fail(format!("derivative not non-increasing near ξ = {xi:e}"));
            }
            prev = d;
        }
        Ok(())
    }

    pub fn is_concave(&self) -> bool {
        self.check_concave().is_ok()
    }

    /// A log range covering the structure of the modulus.
    pub(crate) fn sample_range(&self) -> (f64, f64) {
        let bp = self.breakpoints();
        match (bp.first(), bp.last()) {
            (Some(&a), Some(&b)) => (a * 1e-6, b * 1e2),
            _ => (1e-6 / self.dilation, 1e2 / self.dilation),
        }
    }
}

fn check_positive(xi: f64) -> Result<()> {
    if xi > 0.0 && xi.is_finite() {
        Ok(())
    } else {
        domain(format!("modulus evaluated at ξ = {xi}; need ξ > 0"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knv_head_value() {
        let m = Moc::kisel_nv(1.0 / 9.0, 0.01, 1.6).unwrap();
        let v = m.eval(1.0 / 16.0).unwrap();
        assert!((v - 3.0 / 64.0).abs() < 1e-16);
    }

    #[test]
    fn eventual_origin_value() {
        let (h, d, g) = (2.0, 0.1, 0.7);
        let m = Moc::eventual(h, d, g, d).unwrap();
        assert!((m.value_at_origin() - h * (1.0 - g)).abs() < 1e-14);
        assert!((m.value(1e-300) - h * (1.0 - g)).abs() < 1e-14);
        assert!(m.origin_conditions().positive_at_origin);
    }

    #[test]
    fn stationary_is_flat_past_delta() {
        let m = Moc::stationary_holder(1.5, 0.2, 0.5).unwrap();
        for xi in [0.2000001, 1.0, 1e6] {
            assert_eq!(m.eval(xi).unwrap(), 1.5);
        }
        assert_eq!(m.sup(), 1.5);
        assert_eq!(m.constant_beyond(), Some(0.2));
    }

    #[test]
    fn stationary_inverse_closed_form() {
        let (h, d, g) = (1.5, 0.2, 0.5);
        let m = Moc::stationary_holder(h, d, g).unwrap();
        let x = m.inverse(h / 2.0).unwrap();
        assert!((x - d * 2f64.powf(-1.0 / g)).abs() < 1e-15);
        assert!(m.inverse(2.0 * h).unwrap().is_infinite());
        assert!(m.inverse(-1.0).is_err());
    }

    #[test]
    fn knv_inverse_matches_bisection() {
        let m = Moc::kisel_nv(0.01, 0.001, 1.6).unwrap();
        let bisect = |y: f64| {
            let (mut a, mut b) = (0.0f64, 1e12f64);
            for _ in 0..400 {
                let mid = 0.5 * (a + b);
                if m.value(mid) < y {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        };
        let y = m.value(0.01);
        assert!((m.inverse(y).unwrap() - 0.01).abs() < 1e-12);
        for xi in [1e-4, 3e-3, 0.05, 2.0, 1e3] {
            let y = m.value(xi);
            let inv = m.inverse(y).unwrap();
            assert!((inv - bisect(y)).abs() <= 1e-9 * xi, "{xi}");
            assert!((m.value(inv) - y).abs() <= 1e-10 * y);
        }
        assert!(m.inverse(m.sup()).unwrap().is_infinite());
    }

    #[test]
    fn domain_errors() {
        let m = Moc::power(1.0, 0.5).unwrap();
        assert!(m.eval(0.0).is_err());
        assert!(m.eval(-1.0).is_err());
        assert!(m.deriv(0.0, Side::Left).is_err());
        assert!(Moc::stationary_holder(1.0, 0.1, 1.2).is_err());
        assert!(Moc::eventual(1.0, 0.1, 0.5, 0.2).is_err());
    }

    #[test]
    fn scale_by_one_is_identity() {
        let m = Moc::kisel_nv(0.05, 0.01, 1.5).unwrap();
        let s = m.scale(1.0, 0.3, 1.5).unwrap();
        for xi in [1e-3, 0.05, 1.0, 100.0] {
            assert_eq!(m.value(xi), s.value(xi));
        }
    }

    #[test]
    fn scaled_values_and_inverse() {
        let (a, b, l) = (0.3, 1.6, 7.5);
        let m = Moc::kisel_nv(0.05, 0.01, b).unwrap();
        let s = m.scale(l, a, b).unwrap();
        let e = l.powf(b - a - 1.0);
        for xi in [1e-4, 0.003, 0.2, 10.0] {
            let want = e * m.value(l * xi);
            assert!((s.value(xi) - want).abs() <= 1e-15 * want);
            let y = s.value(xi);
            let inv = s.inverse(y).unwrap();
            let formula = m.inverse(y / e).unwrap() / l;
            assert!((inv - formula).abs() <= 1e-12 * inv);
        }
    }

    #[test]
    fn scaling_composes() {
        let (a, b) = (0.2, 1.7);
        let m = Moc::kisel_nv(0.08, 0.02, b).unwrap();
        let two = m.scale(3.0, a, b).unwrap().scale(0.4, a, b).unwrap();
        let one = m.scale(1.2, a, b).unwrap();
        for k in 0..20 {
            let xi = 1e-5 * 10f64.powf(k as f64 * 0.4);
            let (p, q) = (two.value(xi), one.value(xi));
            assert!((p - q).abs() <= 1e-13 * q, "{xi}");
        }
    }

    #[test]
    fn knv_derivative_jump() {
        let (d, g, b) = (0.04, 0.01, 1.6);
        let m = Moc::kisel_nv(d, g, b).unwrap();
        let left = m.deriv(d, Side::Left).unwrap();
        let right = m.deriv(d, Side::Right).unwrap();
        assert!((left - (1.0 - 1.5 * d.sqrt())).abs() < 1e-15);
        assert!((right - g / (4.0 * (d + d.powf(b)))).abs() < 1e-15);
        assert!(right < 0.25 && left > right);
    }

    #[test]
    fn family_instances_are_concave() {
        let mocs = [
            Moc::kisel_nv(1.0 / 9.0, 0.01, 1.6).unwrap(),
            Moc::kisel_nv(0.003, 1e-5, 1.3).unwrap(),
            Moc::stationary_holder(1.0, 0.1, 0.8).unwrap(),
            Moc::eventual(1.0, 0.1, 0.8, 0.01).unwrap(),
            Moc::eventual(1.0, 0.1, 0.8, 0.1).unwrap(),
        ];
        for m in &mocs {
            m.check_concave().unwrap();
            for b in m.breakpoints() {
                assert!(m.slope(b, Side::Left) >= m.slope(b, Side::Right));
            }
        }
    }

    #[test]
    fn inflated_knv_tail_is_flagged() {
        let m = Moc::kisel_nv(0.01, 1.0, 1.6).unwrap();
        assert!(!m.notes().is_empty());
        assert!(matches!(m.check_concave(), Err(Error::NotConcave(_))));
    }

    #[test]
    fn eventual_tends_to_stationary() {
        let (h, d, g) = (1.0, 0.1, 0.6);
        let ev = Moc::eventual(h, d, g, 1e-8).unwrap();
        let st = Moc::stationary_holder(h, d, g).unwrap();
        for k in 0..50 {
            let xi = 1e-6 * 10f64.powf(k as f64 * 7.0 / 49.0);
            let (a, b) = (ev.value(xi), st.value(xi));
            // the two differ only below ξ₀ and by at most the head's offset
            let bound = h * (1.0 - g) * (1e-8 / d).powf(g) + 1e-15;
            assert!((a - b).abs() <= bound.max(1e-12 * b), "{xi}: {a} vs {b}");
        }
    }

    #[test]
    fn increment_is_accurate_across_breaks() {
        let m = Moc::eventual(1.0, 0.1, 0.7, 0.02).unwrap();
        for &(xi, h) in &[(0.019, 0.002), (0.09, 0.05), (0.15, -0.14), (0.05, 1e-12)] {
            let direct = m.value(xi + h) - m.value(xi);
            let inc = m.increment(xi, h);
            assert!((direct - inc).abs() < 1e-15 + 1e-4 * direct.abs(), "{xi} {h}");
        }
    }

    #[test]
    fn origin_classification() {
        let knv = Moc::kisel_nv(0.05, 0.01, 1.5).unwrap().origin_conditions();
        assert!(knv.infinite_curvature && !knv.infinite_slope && !knv.positive_at_origin);
        let st = Moc::stationary_holder(1.0, 0.1, 0.5).unwrap().origin_conditions();
        assert!(st.infinite_slope);
        let lin = Moc::power(1.0, 1.0).unwrap().origin_conditions();
        assert!(!lin.any());
    }
}
