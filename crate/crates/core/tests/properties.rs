use proptest::prelude::*;

use edudyn::analysis::{attractor_bounds, lyapunov_1d, period_detect, Period};
use edudyn::config::parse_config;
use edudyn::map1d::{gamma, iterate_1d};
use edudyn::map2d::{phi, State2D};
use edudyn::model::{preference_weights, shares_at};
use edudyn::ModelParams;

fn params() -> impl Strategy<Value = ModelParams> {
    (
        0.5..2.0f64,
        0.3..2.0f64,
        0.3..2.0f64,
        0.1..5.0f64,
        0.0..2.0f64,
        0.0..20.0f64,
        0.0..20.0f64,
        0.0..1.0f64,
        0.1..100.0f64,
    )
        .prop_map(|(i, pe, pc, rho, rho_pi, sigma, sigma_pi, kappa, pi_bar)| ModelParams {
            income: i,
            price_education: pe,
            price_consumption: pc,
            rho,
            rho_pi,
            sigma,
            sigma_pi,
            kappa,
            pi_bar,
            ..Default::default()
        })
}

proptest! {
    #[test]
    fn weights_and_shares_stay_in_the_unit_interval(p in params(), u in 0.0..=1.0f64) {
        let e = u * p.max_enrolment();
        let w = preference_weights(e, &p).unwrap();
        for x in [w.alpha_f, w.beta_f, w.alpha_p, w.beta_p] {
            prop_assert!((0.0..=1.0).contains(&x));
        }
        if let Ok(s) = shares_at(e, &p) {
            prop_assert!((0.0..=1.0).contains(&s.follower));
            prop_assert!((0.0..=1.0).contains(&s.positional));
        }
    }

    #[test]
    fn maps_keep_the_domain(p in params(), u in 0.0..=1.0f64, l in 0.0..=1.0f64, mu in 0.0..20.0f64) {
        let e = u * p.max_enrolment();
        if let Ok(g) = gamma(e, l, &p) {
            prop_assert!((0.0..=p.max_enrolment()).contains(&g));
        }
        if let Ok(next) = phi(State2D::new(e, l), &p, mu) {
            prop_assert!((0.0..=p.max_enrolment()).contains(&next.e));
            prop_assert!((0.0..=1.0).contains(&next.lambda));
        }
    }

    #[test]
    fn period_detection_finds_the_minimal_cycle(cycle in prop::collection::vec(0.0..1.0f64, 1..12)) {
        // distinct values so the cycle cannot collapse to a shorter one
        let mut sorted = cycle.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        prop_assume!(sorted.len() == cycle.len());
        let tail: Vec<f64> = (0..300).map(|k| cycle[k % cycle.len()]).collect();
        prop_assert_eq!(period_detect(&tail, 64, 1e-8), Period::Cycle(cycle.len()));
    }

    #[test]
    fn bounds_never_shrink(xs in prop::collection::vec(-5.0..5.0f64, 1..60), cut in 1usize..60) {
        let cut = cut.min(xs.len());
        let a = attractor_bounds(&xs[..cut]).unwrap()[0];
        let b = attractor_bounds(&xs).unwrap()[0];
        prop_assert!(b.0 <= a.0 && b.1 >= a.1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lyapunov_sign_agrees_with_period(sigma in 1.0..20.0f64) {
        let p = ModelParams { sigma, sigma_pi: sigma, ..Default::default() };
        let t = iterate_1d(0.3, 0.5, &p, 300, 2000).unwrap();
        let period = period_detect(t.tail(), 64, 1e-8);
        let l = lyapunov_1d(*t.last(), 0.5, &p, 10_000, 0).unwrap().exponent;
        if period != Period::Aperiodic {
            prop_assert!(l <= 1e-3, "sigma {}: period {} with exponent {}", sigma, period, l);
        }
        if l > 0.01 {
            prop_assert_eq!(period, Period::Aperiodic);
        }
    }

    #[test]
    fn effective_config_round_trips(rho in 0.1..5.0f64, sigma in 0.0..20.0f64, burn in 0usize..5000, lambda in 0.0..=1.0f64) {
        let text = format!(
            "experiment = bifurcate\nmodel.rho = {rho}\nmodel.sigma = {sigma}\nrun.burn_in = {burn}\nmix.lambda = {lambda}"
        );
        let cfg = parse_config(&text, "a").unwrap();
        let echoed: String = cfg
            .effective
            .iter()
            .filter(|(k, _)| k != "preset")
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect();
        let again = parse_config(&echoed, "b").unwrap();
        prop_assert_eq!(cfg, again);
    }
}
