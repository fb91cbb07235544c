//! Values checked against independent computations.

use edudyn::map1d::gamma;
use edudyn::model::{indirect_utility, preference_weights};
use edudyn::ModelParams;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

// 50-digit evaluation, see oracles/weights.py
#[allow(clippy::excessive_precision)]
const WEIGHTS_AT_HALF: [f64; 4] = [
    0.387_373_605_815_583_931_01,
    0.522_706_007_517_328_232_66,
    2.612_585_573_016_675_324_9e-4,
    3.906_650_547_028_612_187_5e-6,
];
#[allow(clippy::excessive_precision)]
const GAMMA_AT_ZERO: f64 = 0.416_666_666_666_654_097_68;

#[test]
fn weights_match_extended_precision() {
    let w = preference_weights(0.5, &ModelParams::default()).unwrap();
    for (got, want) in [w.alpha_f, w.beta_f, w.alpha_p, w.beta_p].iter().zip(WEIGHTS_AT_HALF) {
        assert!(close(*got, want, 1e-13), "{got} vs {want}");
    }
}

#[test]
fn map_at_zero_matches_extended_precision() {
    let g = gamma(0.0, 0.5, &ModelParams::default()).unwrap();
    assert!(close(g, GAMMA_AT_ZERO, 1e-13), "{g}");
}

/// Maximises `alpha log e + beta log c` on the budget line by brute force.
fn grid_max(alpha: f64, beta: f64, p: &ModelParams) -> f64 {
    const N: usize = 1_000_000;
    let (ie, ic) = (p.income / p.price_education, p.income / p.price_consumption);
    let weighted = |w: f64, x: f64| if w == 0.0 { 0.0 } else { w * x.ln() };
    (0..N)
        .map(|k| {
            let x = (k as f64 + 0.5) / N as f64;
            weighted(alpha, x * ie) + weighted(beta, (1.0 - x) * ic)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn indirect_utility_matches_grid_search() {
    for sigma in [3.0, 16.5] {
        let p = ModelParams {
            sigma,
            sigma_pi: sigma,
            ..Default::default()
        };
        let e = 0.4;
        let w = preference_weights(e, &p).unwrap();
        let u = indirect_utility(e, &p).unwrap();
        for (closed, (a, b)) in [
            (u.follower, (w.alpha_f, w.beta_f)),
            (u.positional, (w.alpha_p, w.beta_p)),
        ] {
            let brute = grid_max(a, b, &p);
            assert!(brute <= closed + 1e-15, "grid beats the optimum: {brute} > {closed}");
            assert!((closed - brute).abs() <= 1e-9 + 1e-7 * closed.abs(), "{closed} vs {brute}");
        }
    }
}
