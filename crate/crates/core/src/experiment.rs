//! Dispatch from a [`RunConfig`] to the model operations and their tables.

use crate::analysis::{bifurcation_sweep, cobweb, MapSpec, SweepSpec};
use crate::config::{Experiment, MapKind, RunConfig};
use crate::error::{ModelError, Result};
use crate::map1d::{absorbing_interval, comparative_statics_kappa, fixed_points_1d, iterate_1d};
use crate::map2d::{fixed_points_2d, iterate_2d, mu_threshold, FixedPoint2D, State2D};
use crate::model::premium_regime;
use crate::output::{flag, float, OutputFile, Table};

const NAN: f64 = f64::NAN;

fn status(r: std::result::Result<(), &ModelError>) -> String {
    match r {
        Ok(()) => "ok".into(),
        Err(e) => e.kind().into(),
    }
}

pub fn sweep_spec(cfg: &RunConfig) -> SweepSpec {
    let map = match cfg.run.map {
        MapKind::OneD => MapSpec::OneD {
            lambda: cfg.mix.lambda,
        },
        MapKind::TwoD => MapSpec::TwoD { mu: cfg.mix.mu },
    };
    let s = &cfg.sweep;
    SweepSpec {
        grid_points: s.grid_points,
        burn_in: cfg.run.burn_in,
        samples: cfg.run.steps,
        lyapunov_steps: cfg.run.lyapunov_steps,
        seed: State2D::new(cfg.run.e0, cfg.run.lambda0),
        tie_sigma_pi: s.tie_sigma_pi,
        continuation: s.continuation,
        max_period: s.max_period,
        period_tol: s.period_tol,
        ..SweepSpec::new(map, s.parameter, (s.lo, s.hi))
    }
}

/// Runs the configured experiment. `threads` caps sweep parallelism.
pub fn run(cfg: &RunConfig, threads: Option<usize>) -> Result<Vec<OutputFile>> {
    let tables: Vec<(String, Table)> = match cfg.experiment {
        Experiment::Simulate => vec![("simulate.csv".into(), simulate(cfg)?)],
        Experiment::Cobweb => {
            let (curve, stairs) = cobweb_tables(cfg)?;
            vec![
                ("cobweb_curve.csv".into(), curve),
                ("cobweb_staircase.csv".into(), stairs),
            ]
        }
        Experiment::FixedPoints => vec![("fixed-points.csv".into(), fixed_points(cfg)?)],
        Experiment::AbsorbingInterval => {
            let a = absorbing_interval(cfg.mix.lambda, &cfg.model)?;
            let mut t = Table::new("absorbing-interval");
            t.push(vec![
                float(cfg.mix.lambda),
                float(a.e_c),
                float(a.e_min),
                float(a.e_max),
                flag(a.unimodal_certified),
            ]);
            vec![("absorbing-interval.csv".into(), t)]
        }
        Experiment::Bifurcate => vec![("bifurcate.csv".into(), bifurcate(cfg, threads)?)],
        Experiment::Stability => vec![("stability.csv".into(), stability(cfg)?)],
        Experiment::MuThreshold => vec![("mu-threshold.csv".into(), mu_thresholds(cfg)?)],
        Experiment::ComparativeStatics => {
            vec![("comparative-statics.csv".into(), comparative_statics(cfg)?)]
        }
    };
    Ok(tables
        .into_iter()
        .map(|(name, t)| OutputFile {
            name,
            contents: t.render(&cfg.effective),
        })
        .collect())
}

fn simulate(cfg: &RunConfig) -> Result<Table> {
    let r = &cfg.run;
    match r.map {
        MapKind::OneD => {
            let traj = iterate_1d(r.e0, cfg.mix.lambda, &cfg.model, r.steps, r.burn_in)?;
            let mut t = Table::new("simulate");
            for (k, e) in traj.tail().iter().enumerate() {
                t.push(vec![(r.burn_in + 1 + k).to_string(), float(*e)]);
            }
            Ok(t)
        }
        MapKind::TwoD => {
            let start = State2D::new(r.e0, r.lambda0);
            let traj = iterate_2d(start, &cfg.model, cfg.mix.mu, r.steps, r.burn_in)?;
            let mut t = Table::new("simulate-2d");
            for (k, s) in traj.tail().iter().enumerate() {
                t.push(vec![(r.burn_in + 1 + k).to_string(), float(s.e), float(s.lambda)]);
            }
            Ok(t)
        }
    }
}

fn cobweb_tables(cfg: &RunConfig) -> Result<(Table, Table)> {
    let path = cobweb(
        cfg.run.e0,
        cfg.mix.lambda,
        &cfg.model,
        cfg.cobweb_steps,
        cfg.cobweb_curve_grid,
    )?;
    let mut curve = Table::new("cobweb-curve");
    for (e, g) in path.curve {
        curve.push(vec![float(e), float(g)]);
    }
    let mut stairs = Table::new("cobweb-staircase");
    for (k, (x, y)) in path.staircase.into_iter().enumerate() {
        stairs.push(vec![k.to_string(), float(x), float(y)]);
    }
    Ok((curve, stairs))
}

fn fixed_points(cfg: &RunConfig) -> Result<Table> {
    match cfg.run.map {
        MapKind::OneD => {
            let mut t = Table::new("fixed-points");
            for fp in fixed_points_1d(cfg.mix.lambda, &cfg.model, cfg.scan_grid)? {
                t.push(vec![
                    float(fp.e_star),
                    float(fp.gamma_prime.value),
                    fp.classification.name().into(),
                    fp.regime.name().into(),
                ]);
            }
            Ok(t)
        }
        MapKind::TwoD => {
            let mut t = Table::new("fixed-points-2d");
            for fp in fixed_points_2d(&cfg.model, cfg.mix.mu, cfg.scan_grid)? {
                let (slope, class) = match &fp.stability {
                    Ok(r) => {
                        let class = if r.schur.nonhyperbolic {
                            "nonhyperbolic"
                        } else if r.schur.stable {
                            "stable"
                        } else {
                            "unstable"
                        };
                        (r.schur.jacobian.gamma_e, class.to_string())
                    }
                    Err(e) => (NAN, e.kind().to_string()),
                };
                t.push(vec![
                    float(fp.state.e),
                    float(fp.state.lambda),
                    float(slope),
                    class,
                    premium_regime(fp.state.e, &cfg.model).name().into(),
                ]);
            }
            Ok(t)
        }
    }
}

fn bifurcate(cfg: &RunConfig, threads: Option<usize>) -> Result<Table> {
    let spec = sweep_spec(cfg);
    let diagram = bifurcation_sweep(&spec, &cfg.model, threads)?;
    let two_d = matches!(spec.map, MapSpec::TwoD { .. });
    let mut t = Table::new(if two_d { "bifurcate-2d" } else { "bifurcate" });
    for cell in &diagram.cells {
        let lyap = float(cell.lyapunov.unwrap_or(NAN));
        let period = cell.period.map_or("none".into(), |p| p.to_string());
        let status = cell.error.as_ref().map_or("ok".into(), |e| e.kind.clone());
        let row = |k: usize, e: f64, l: f64| {
            let mut row = vec![float(cell.param_value), k.to_string(), float(e)];
            if two_d {
                row.push(float(l));
            }
            row.extend([lyap.clone(), period.clone(), status.clone()]);
            row
        };
        if cell.states.is_empty() {
            t.push(row(0, NAN, NAN));
        }
        for (k, s) in cell.states.iter().enumerate() {
            t.push(row(k, s.e, s.lambda));
        }
    }
    Ok(t)
}

fn two_d_points(cfg: &RunConfig) -> Result<Vec<FixedPoint2D>> {
    fixed_points_2d(&cfg.model, cfg.mix.mu, cfg.scan_grid)
}

fn stability(cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new("stability");
    for fp in two_d_points(cfg)? {
        let head = [float(fp.state.e), float(fp.state.lambda)];
        let row: Vec<String> = match &fp.stability {
            Ok(r) => {
                let s = &r.schur;
                let j = &s.jacobian;
                head.into_iter()
                    .chain([
                        float(j.gamma_e),
                        float(j.gamma_lambda),
                        float(j.v_e),
                        float(j.v_lambda),
                        float(j.trace),
                        float(j.det),
                        float(s.schur_1),
                        float(s.schur_2),
                        float(s.schur_3),
                        flag(s.stable),
                        float(s.spectral_radius),
                        s.nearest_bifurcation.name().into(),
                        float(s.bifurcation_residual),
                        "ok".into(),
                    ])
                    .collect()
            }
            Err(e) => head
                .into_iter()
                .chain((0..9).map(|_| float(NAN)))
                .chain([flag(false), float(NAN), "none".into(), float(NAN), e.kind().into()])
                .collect(),
        };
        t.push(row);
    }
    Ok(t)
}

fn mu_thresholds(cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new("mu-threshold");
    for fp in two_d_points(cfg)? {
        let stable = fp.stability.as_ref().is_ok_and(|r| r.schur.stable);
        let mut row = vec![float(fp.state.e), float(fp.state.lambda), float(cfg.mix.mu), flag(stable)];
        match mu_threshold(fp.state, &cfg.model) {
            Ok(m) => {
                row.extend([m.g_star, m.h_star, m.g_hat, m.h_hat, m.at_point, m.conservative].map(float));
                row.push(status(Ok(())));
            }
            Err(e) => {
                row.extend((0..6).map(|_| float(NAN)));
                row.push(status(Err(&e)));
            }
        }
        t.push(row);
    }
    Ok(t)
}

fn comparative_statics(cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new("comparative-statics");
    for fp in fixed_points_1d(cfg.mix.lambda, &cfg.model, cfg.scan_grid)? {
        let mut row = vec![float(cfg.model.kappa), float(fp.e_star)];
        match comparative_statics_kappa(fp.e_star, cfg.mix.lambda, &cfg.model) {
            Ok(k) => {
                row.extend(
                    [k.gamma_e, k.gamma_kappa, k.gamma_kappa_via_premium, k.d_e_star_d_kappa].map(float),
                );
                row.push(status(Ok(())));
            }
            Err(e) => {
                row.extend([fp.gamma_prime.value, NAN, NAN, NAN].map(float));
                row.push(status(Err(&e)));
            }
        }
        t.push(row);
    }
    Ok(t)
}
