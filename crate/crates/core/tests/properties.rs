mod common;

use gsqg::certify::{
    certify_subcritical, omega1, subcritical_thresholds, upsilon_beta, CriterionConstants,
    SubcriticalGrid,
};
use gsqg::diagnostics::{holder_seminorm, Tracker};
use gsqg::evolution::{InitialData, Scheme, SolverParams, Stepper};
use gsqg::moc::{obeys, Moc};
use gsqg::pairs::PairPlan;
use gsqg::spectral::Grid2D;
use proptest::prelude::*;

fn kisel_for(alpha: f64, beta: f64, shrink: f64) -> (Moc, CriterionConstants) {
    let c = CriterionConstants::new(alpha, beta, 1.0);
    let delta = shrink * subcritical_thresholds(&c, 1.0).unwrap().delta;
    let gamma = shrink * subcritical_thresholds(&c, delta).unwrap().gamma;
    (Moc::kisel_nv(delta, gamma, beta).unwrap(), c)
}

fn concave_moc() -> impl Strategy<Value = Moc> {
    prop_oneof![
        (0.05f64..0.95, 0.1f64..10.0).prop_map(|(g, c)| Moc::power(c, g).unwrap()),
        (0.1f64..5.0, 0.01f64..2.0, 0.05f64..0.95)
            .prop_map(|(h, d, g)| Moc::stationary_holder(h, d, g).unwrap()),
        (0.1f64..5.0, 0.01f64..1.0, 0.05f64..0.95, 0.01f64..1.0)
            .prop_map(|(h, d, g, f)| Moc::eventual(h, d, g, f * d).unwrap()),
        (0.05f64..0.5, 1.1f64..1.95).prop_map(|(a, b)| {
            let b = b.max(a + 1.05);
            kisel_for(a, b.min(1.99), 0.5).0
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dissipation_is_never_positive(moc in concave_moc(), log_xi in -6.0f64..4.0, beta in 0.3f64..1.95) {
        let xi = 10f64.powf(log_xi);
        let u = upsilon_beta(&moc, xi, beta, 1.0).unwrap().value;
        prop_assert!(u <= 0.0, "Υ = {u} at ξ = {xi}");
    }

    #[test]
    fn drift_bound_is_positive_and_increasing(log_xi in -6.0f64..3.0, alpha in 0.05f64..0.6) {
        let (moc, _) = kisel_for(alpha, 1.2 + alpha, 0.5);
        let xi = 10f64.powf(log_xi);
        let a = omega1(&moc, xi, alpha, 1.0).unwrap().value;
        let b = omega1(&moc, 1.5 * xi, alpha, 1.0).unwrap().value;
        prop_assert!(a > 0.0 && b >= a * (1.0 - 1e-10));
    }

    #[test]
    fn functionals_follow_the_critical_scaling(
        alpha in 0.05f64..0.6,
        excess in 0.05f64..0.4,
        log_lambda in -2.0f64..2.0,
        log_xi in -5.0f64..3.0,
    ) {
        let beta = (1.0 + alpha + excess).min(1.99);
        let (moc, _) = kisel_for(alpha, beta, 0.5);
        let lambda = 10f64.powf(log_lambda);
        let xi = 10f64.powf(log_xi);
        let scaled = moc.scale(lambda, alpha, beta).unwrap();
        let o_l = omega1(&scaled, xi, alpha, 1.0).unwrap().value;
        let o = lambda.powf(beta - 1.0) * omega1(&moc, lambda * xi, alpha, 1.0).unwrap().value;
        prop_assert!(common::rel_err(o_l, o) < 1e-8);
        let u_l = upsilon_beta(&scaled, xi, beta, 1.0).unwrap().value;
        let u = lambda.powf(2.0 * beta - alpha - 1.0) * upsilon_beta(&moc, lambda * xi, beta, 1.0).unwrap().value;
        prop_assert!(common::rel_err(u_l, u) < 1e-8);
    }

    #[test]
    fn holder_seminorm_is_homogeneous(seed in 0u64..1000, gamma in 0.05f64..0.95, factor in 0.1f64..10.0) {
        let g = Grid2D::periodic(16).unwrap();
        let f = InitialData::RandomSmooth { seed, spectrum_decay: 2.5, amplitude: 1.0 }.build(&g).unwrap();
        let plan = PairPlan::default();
        let a = holder_seminorm(&f, gamma, &plan).unwrap().value;
        let b = holder_seminorm(&f.scaled(factor), gamma, &plan).unwrap().value;
        prop_assert!(common::rel_err(b, factor * a) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn evolution_conserves_mean_and_never_gains_energy(
        seed in 0u64..10_000,
        offset in -1.0f64..1.0,
        alpha in 0.05f64..0.9,
        beta in 0.3f64..1.95,
        rk4 in any::<bool>(),
    ) {
        let g = Grid2D::periodic(32).unwrap();
        let raw = InitialData::RandomSmooth { seed, spectrum_decay: 3.0, amplitude: 1.0 }.build(&g).unwrap();
        let theta0 = raw.map_modes(|i, c| if i == 0 { c + offset } else { c });
        let p = SolverParams {
            alpha,
            beta,
            dt: 1e-3,
            t_end: 0.25,
            scheme: if rk4 { Scheme::Rk4 } else { Scheme::Rk2 },
            ..Default::default()
        };
        let st = Stepper::new(&g, &p).unwrap();
        let mut tracker = Tracker::new(PairPlan::default());
        let mut prev: Option<(f64, f64, f64)> = None;
        let mut ok = Ok(());
        st.run(&theta0, p.dt, |s| {
            let r = tracker.record(s).unwrap();
            let mean = s.theta.mean();
            if let Some((l2, bi, m)) = prev {
                if (mean - m).abs() > 1e-12 {
                    ok = Err(format!("mean drifted by {}", mean - m));
                } else if r.l2 > l2 * (1.0 + 1e-10) {
                    ok = Err(format!("L2 rose from {l2} to {}", r.l2));
                } else if r.blowup_integral < bi {
                    ok = Err("blow-up integral decreased".into());
                } else if r.energy_residual > 1e-8 * theta0.energy() {
                    ok = Err(format!("energy residual {}", r.energy_residual));
                }
            }
            prev = Some((r.l2, r.blowup_integral, mean));
        }).unwrap();
        prop_assert!(ok.is_ok(), "{:?}", ok);
    }

    #[test]
    fn stronger_dissipation_keeps_a_pass(
        pair in prop::sample::select(vec![(0.1, 1.3), (0.3, 1.6), (0.5, 1.8)]),
        boost in 1.0f64..20.0,
    ) {
        let (moc, c) = kisel_for(pair.0, pair.1, 0.5);
        let grid = SubcriticalGrid { per_decade: 20, dense_per_decade: 40, ..Default::default() };
        let base = certify_subcritical(&moc, &c, &grid).unwrap();
        prop_assert!(base.passed());
        let stronger = CriterionConstants { nu: c.nu * boost, ..c };
        prop_assert!(certify_subcritical(&moc, &stronger, &grid).unwrap().passed());
    }

    #[test]
    fn scaled_modulus_from_lambda_choice_is_obeyed(seed in 0u64..10_000, amplitude in 0.1f64..5.0) {
        let (moc, _) = kisel_for(0.3, 1.6, 0.5);
        let g = Grid2D::periodic(32).unwrap();
        let f = InitialData::RandomSmooth { seed, spectrum_decay: 3.0, amplitude }.build(&g).unwrap();
        let grad = gsqg::spectral::gradient(&f).linf_norm();
        let delta = moc.breakpoints()[0];
        let choice = gsqg::certify::lambda_for_data(f.linf_norm(), grad, moc.value(delta), &moc, 0.3, 1.6).unwrap();
        let report = obeys(&f, &choice.scaled(&moc).unwrap(), &PairPlan::default());
        prop_assert!(report.obeyed, "ratio {}", report.ratio);
    }
}

#[test]
fn holder_tail_bound_holds() {
    // ξ ∫_ξ^∞ ω/η^{2+α} ≤ ξ^{−α} ω(ξ)/(1 + α − γ) for the stationary Hölder modulus
    let (alpha, h, delta, gamma) = (0.2, 1.5, 0.5, 0.4);
    let moc = Moc::stationary_holder(h, delta, gamma).unwrap();
    for xi in common::logspace(1e-6 * delta, delta, 50) {
        let o = omega1(&moc, xi, alpha, 1.0).unwrap().value;
        let head = (h / delta.powf(gamma)) * xi.powf(gamma - alpha) / (gamma - alpha);
        let tail = o - head;
        let bound = xi.powf(-alpha) * moc.value(xi) / (1.0 + alpha - gamma);
        assert!(tail <= bound * (1.0 + 1e-10), "ξ = {xi}: {tail} > {bound}");
    }
}

#[test]
fn power_drift_matches_closed_form() {
    let (alpha, gamma) = (0.3, 0.7);
    let moc = Moc::power(1.0, gamma).unwrap();
    for xi in common::logspace(1e-4, 1e4, 25) {
        let want = xi.powf(gamma - alpha) * (1.0 / (gamma - alpha) + 1.0 / (1.0 + alpha - gamma));
        let got = omega1(&moc, xi, alpha, 1.0).unwrap().value;
        assert!(common::rel_err(got, want) < 1e-9, "ξ = {xi}: {got} vs {want}");
    }
}
