use serde::Serialize;

use crate::error::{domain, Result};
use crate::pairs::{max_pair_ratio, PairMax, PairPlan};
use crate::spectral::{dyadic_shell_energy, shell_index_range, ScalarField2D};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderEstimate {
    pub gamma: f64,
    pub value: f64,
    pub search: PairMax,
}

/// `max |f(x) − f(y)| / |x − y|^γ` over the pair plan (torus distance).
pub fn holder_seminorm(f: &ScalarField2D, gamma: f64, plan: &PairPlan) -> Result<HolderEstimate> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return domain(format!("gamma = {gamma} must lie in ]0, 1["));
    }
    let search = max_pair_ratio(f, |d| d.powf(gamma), plan);
    Ok(HolderEstimate {
        gamma,
        value: search.ratio,
        search,
    })
}

/// `Ḣ^s = B^s_{2,2}` seminorm by sharp dyadic shells and by the direct
/// `|k|^{2s}`-weighted Parseval sum. The two agree within `2^{±s}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesovEstimate {
    pub s: f64,
    /// `(Σ_j 2^{2js} ‖Δ_j f‖²)^{1/2}`
    pub shell: f64,
    /// `(Σ_k |k|^{2s} |f̂(k)|² · area)^{1/2}`
    pub direct: f64,
    pub warning: Option<String>,
}

pub fn besov_seminorm(f: &ScalarField2D, s: f64) -> Result<BesovEstimate> {
    if !s.is_finite() {
        return domain("smoothness index must be finite");
    }
    let g = f.grid();
    let (lo, hi) = shell_index_range(g);
    let weighted: Vec<f64> = (lo..=hi)
        .map(|j| 2f64.powf(2.0 * s * j as f64) * dyadic_shell_energy(f, j).energy)
        .collect();
    let total: f64 = weighted.iter().sum();
    let direct: f64 = f
        .spectral()
        .iter()
        .enumerate()
        .filter_map(|(idx, c)| {
            let k = g.wavenumber(idx);
            (k > 0.0).then(|| k.powf(2.0 * s) * c.norm_sqr())
        })
        .sum::<f64>()
        * g.area();
    let top = weighted.last().copied().unwrap_or(0.0);
    let warning = (total > 0.0 && top > 0.5 * total).then(|| {
        format!("the highest resolved shell carries {:.0}% of the H^{s} sum; the grid does not resolve this seminorm", 100.0 * top / total)
    });
    Ok(BesovEstimate {
        s,
        shell: total.sqrt(),
        direct: direct.sqrt(),
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid2D;

    #[test]
    fn constant_field_and_homogeneity() {
        let g = Grid2D::periodic(16).unwrap();
        let plan = PairPlan::default();
        let c = ScalarField2D::from_fn(&g, |_, _| 4.0);
        assert_eq!(holder_seminorm(&c, 0.5, &plan).unwrap().value, 0.0);
        let f = ScalarField2D::from_fn(&g, |x, y| (x + 2.0 * y).sin());
        let a = holder_seminorm(&f, 0.4, &plan).unwrap().value;
        let b = holder_seminorm(&f.scaled(2.0), 0.4, &plan).unwrap().value;
        assert_eq!(b, 2.0 * a);
        assert!(holder_seminorm(&f, 1.0, &plan).is_err());
    }

    #[test]
    fn single_mode_direct_sum() {
        let g = Grid2D::periodic(32).unwrap();
        let f = ScalarField2D::from_fn(&g, |x, y| (3.0 * x + 4.0 * y).cos());
        let e = besov_seminorm(&f, 1.0).unwrap();
        assert!((e.direct - 5.0 * f.l2_norm()).abs() < 1e-12);
        // |k| = 5 lies in the shell [4, 8)
        assert!((e.shell - 4.0 * f.l2_norm()).abs() < 1e-12);
        assert!(e.warning.is_none());
    }

    #[test]
    fn order_zero_is_l2_without_mean() {
        let g = Grid2D::periodic(16).unwrap();
        let f = ScalarField2D::from_fn(&g, |x, y| 1.5 + x.sin() * y.cos());
        let e = besov_seminorm(&f, 0.0).unwrap();
        let centered = ScalarField2D::from_fn(&g, |x, y| x.sin() * y.cos());
        assert!((e.direct - centered.l2_norm()).abs() < 1e-12);
        assert!((e.shell - centered.l2_norm()).abs() < 1e-12);
    }
}
