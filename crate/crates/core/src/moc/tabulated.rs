use std::io::Read;

use super::{Moc, Piece};
use crate::error::{Error, Result};

impl Moc {
    /// Piecewise-linear modulus through `(ξᵢ, ωᵢ)`. The first segment is
    /// extended to the origin and the last value is held constant beyond the
    /// table. The data must be increasing in `ξ`, non-decreasing and concave.
    pub fn tabulated(points: &[(f64, f64)]) -> Result<Moc> {
        if points.len() < 2 {
            return Err(Error::Format("a tabulated modulus needs at least two rows".into()));
        }
        let mut slopes = Vec::with_capacity(points.len() - 1);
        for (i, w) in points.windows(2).enumerate() {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if !(x0 > 0.0 && x1 > x0 && x1.is_finite()) {
                return Err(Error::Format(format!(
                    "ξ column must be positive and strictly increasing (row {})",
                    i + 1
                )));
            }
            if !(y0.is_finite() && y1.is_finite()) {
                return Err(Error::Format(format!("non-finite ω value near row {}", i + 1)));
            }
            slopes.push((y1 - y0) / (x1 - x0));
        }
        if slopes.iter().any(|&s| s < 0.0) {
            return Err(Error::NotConcave("tabulated values decrease".into()));
        }
        if slopes.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::NotConcave("tabulated slopes increase".into()));
        }
        let (x0, y0) = points[0];
        if y0 - slopes[0] * x0 < 0.0 {
            return Err(Error::NotConcave(
                "linear extension to the origin goes negative".into(),
            ));
        }
        let mut pieces: Vec<Piece> = points
            .windows(2)
            .zip(&slopes)
            .map(|(w, &slope)| Piece::Affine {
                slope,
                intercept: w[0].1 - slope * w[0].0,
            })
            .collect();
        pieces.push(Piece::Constant(points[points.len() - 1].1));
        let breaks = points[1..].iter().map(|p| p.0).collect();
        Ok(Moc::from_pieces("tabulated", pieces, breaks)?.mark_approximate())
    }
}

/// Read `ξ,ω` rows. Blank lines, `#` comments and a non-numeric header are skipped.
pub fn read_tabulated_csv<R: Read>(reader: R) -> Result<Moc> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut points = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
        let (Some(a), Some(b)) = (rec.get(0), rec.get(1)) else {
            return Err(Error::Format(format!("row {}: expected two columns", i + 1)));
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(y)) => points.push((x, y)),
            _ if points.is_empty() => continue,
            _ => return Err(Error::Format(format!("row {}: cannot parse '{a},{b}'", i + 1))),
        }
    }
    Moc::tabulated(&points)
}
