//! Orbit diagnostics and the bifurcation sweep driver.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ModelError, Result};
use crate::map1d::{gamma, gamma_slope, iterate_1d};
use crate::map2d::{iterate_2d, jacobian_2d, phi, Jacobian2D, State2D};
use crate::model::{check_lambda, ModelParams, Param};

pub const DEFAULT_BURN_IN: usize = 2000;
pub const DEFAULT_SAMPLES: usize = 300;
pub const DEFAULT_GRID_POINTS: usize = 1000;
pub const DEFAULT_LYAPUNOV_STEPS: usize = 10_000;
pub const DEFAULT_E0: f64 = 0.3;
pub const DEFAULT_LAMBDA0: f64 = 0.5;
pub const MAX_PERIOD: usize = 64;
pub const PERIOD_TOL: f64 = 1e-8;
pub const MIN_LYAPUNOV_STEPS: usize = 10_000;
pub const MIN_GRID_POINTS: usize = 100;
/// Tangent vectors are renormalised this often in the 2-D estimate.
pub const RENORMALIZE_EVERY: usize = 10;

/// Floor applied before taking logs so superstable points stay finite.
const LOG_FLOOR: f64 = f64::MIN_POSITIVE;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derivative {
    pub value: f64,
    pub error: f64,
}

/// Central difference with Richardson extrapolation. The error estimate is
/// the gap between the `h` and `h/2` differences plus a rounding term.
pub fn finite_difference(
    mut f: impl FnMut(f64) -> Result<f64>,
    x: f64,
    h_rel: f64,
) -> Result<Derivative> {
    let h = h_rel * x.abs().max(1.0);
    let f_pp = f(x + h)?;
    let f_mm = f(x - h)?;
    let f_p = f(x + 0.5 * h)?;
    let f_m = f(x - 0.5 * h)?;
    let d_h = (f_pp - f_mm) / (2.0 * h);
    let d_half = (f_p - f_m) / h;
    let scale = f_pp.abs().max(f_mm.abs()).max(f_p.abs()).max(f_m.abs());
    let rounding = 4.0 * f64::EPSILON * scale / h;
    Ok(Derivative {
        value: (4.0 * d_half - d_h) / 3.0,
        error: (d_half - d_h).abs() + rounding,
    })
}

/// A state that can be compared coordinatewise.
pub trait OrbitState: Copy {
    const DIM: usize;
    fn coord(&self, i: usize) -> f64;

    fn max_gap(&self, other: &Self) -> f64 {
        (0..Self::DIM)
            .map(|i| (self.coord(i) - other.coord(i)).abs())
            .fold(0.0, f64::max)
    }
}

impl OrbitState for f64 {
    const DIM: usize = 1;
    fn coord(&self, _: usize) -> f64 {
        *self
    }
}

impl OrbitState for State2D {
    const DIM: usize = 2;
    fn coord(&self, i: usize) -> f64 {
        if i == 0 {
            self.e
        } else {
            self.lambda
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Period {
    Cycle(usize),
    Aperiodic,
}

impl Period {
    pub fn cycle(self) -> Option<usize> {
        match self {
            Period::Cycle(p) => Some(p),
            Period::Aperiodic => None,
        }
    }
}

impl std::fmt::Display for Period {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Period::Cycle(p) => write!(f, "{p}"),
            Period::Aperiodic => f.write_str("aperiodic"),
        }
    }
}

/// Smallest lag `p <= max_period` with every lag-`p` difference over the
/// tail within `tol`. Lags longer than a quarter of the tail are not tried.
pub fn period_detect<S: OrbitState>(tail: &[S], max_period: usize, tol: f64) -> Period {
    let cap = max_period.min(tail.len() / 4);
    (1..=cap)
        .find(|&p| tail.windows(p + 1).all(|w| w[0].max_gap(&w[p]) <= tol))
        .map_or(Period::Aperiodic, Period::Cycle)
}

/// `(min, max)` of each coordinate over the tail.
pub fn attractor_bounds<S: OrbitState>(tail: &[S]) -> Result<Vec<(f64, f64)>> {
    if tail.is_empty() {
        return Err(ModelError::InvalidArgument("attractor bounds need a non-empty tail".into()));
    }
    Ok((0..S::DIM)
        .map(|i| {
            tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                let x = s.coord(i);
                (lo.min(x), hi.max(x))
            })
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub exponent: f64,
    pub steps: usize,
    /// Steps where the closed-form derivative was unavailable.
    pub fallback_points: usize,
}

fn check_steps(n: usize) -> Result<()> {
    if n < MIN_LYAPUNOV_STEPS {
        return Err(ModelError::InvalidArgument(format!(
            "lyapunov estimate needs at least {MIN_LYAPUNOV_STEPS} steps, got {n}"
        )));
    }
    Ok(())
}

fn slope_1d(e: f64, lambda: f64, params: &ModelParams) -> Result<(f64, bool)> {
    match gamma_slope(e, lambda, params) {
        Ok(s) => Ok((s.value, s.analytic)),
        Err(_) => {
            let upper = params.max_enrolment();
            let h = params.tol.fd_step * e.abs().max(1.0);
            let lo = (e - h).max(0.0);
            let hi = (e + h).min(upper);
            let d = (gamma(hi, lambda, params)? - gamma(lo, lambda, params)?) / (hi - lo);
            Ok((d, false))
        }
    }
}

pub fn lyapunov_1d(
    e0: f64,
    lambda: f64,
    params: &ModelParams,
    n: usize,
    burn_in: usize,
) -> Result<LyapunovEstimate> {
    check_steps(n)?;
    let lambda = check_lambda(lambda)?;
    let mut e = params.check_enrolment(e0)?;
    for _ in 0..burn_in {
        e = gamma(e, lambda, params)?;
    }
    let mut sum = 0.0;
    let mut fallback_points = 0;
    for _ in 0..n {
        let (d, analytic) = slope_1d(e, lambda, params)?;
        if !analytic {
            fallback_points += 1;
        }
        sum += d.abs().max(LOG_FLOOR).ln();
        e = gamma(e, lambda, params)?;
    }
    Ok(LyapunovEstimate {
        exponent: sum / n as f64,
        steps: n,
        fallback_points,
    })
}

fn fd_jacobian_2d(state: State2D, params: &ModelParams, mu: f64) -> Result<Jacobian2D> {
    let upper = params.max_enrolment();
    let h = params.tol.fd_step;
    let lo = (state.e - h).max(0.0);
    let hi = (state.e + h).min(upper);
    let a = phi(State2D::new(lo, state.lambda), params, mu)?;
    let b = phi(State2D::new(hi, state.lambda), params, mu)?;
    let l_lo = (state.lambda - h).max(0.0);
    let l_hi = (state.lambda + h).min(1.0);
    let c = gamma(state.e, l_lo, params)?;
    let d = gamma(state.e, l_hi, params)?;
    Ok(Jacobian2D::new(
        (b.e - a.e) / (hi - lo),
        (d - c) / (l_hi - l_lo),
        (b.lambda - a.lambda) / (hi - lo),
    ))
}

pub fn lyapunov_2d(
    state0: State2D,
    params: &ModelParams,
    mu: f64,
    n: usize,
    burn_in: usize,
) -> Result<LyapunovEstimate> {
    check_steps(n)?;
    let mut x = state0;
    for _ in 0..burn_in {
        x = phi(x, params, mu)?;
    }
    let mut v = [1.0, 0.0];
    let mut sum = 0.0;
    let mut fallback_points = 0;
    for k in 1..=n {
        let j = match jacobian_2d(x, params, mu) {
            Ok(j) => j,
            Err(_) => {
                fallback_points += 1;
                fd_jacobian_2d(x, params, mu)?
            }
        };
        v = j.apply(v);
        x = phi(x, params, mu)?;
        if k % RENORMALIZE_EVERY == 0 || k == n {
            let norm = v[0].hypot(v[1]);
            sum += norm.max(LOG_FLOOR).ln();
            v = if norm > 0.0 && norm.is_finite() {
                [v[0] / norm, v[1] / norm]
            } else {
                [1.0, 0.0]
            };
        }
    }
    Ok(LyapunovEstimate {
        exponent: sum / n as f64,
        steps: n,
        fallback_points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CobwebPath {
    /// `(E, gamma(E))` on an even grid over the domain.
    pub curve: Vec<(f64, f64)>,
    /// `(E_0, E_0), (E_0, E_1), (E_1, E_1), ...`
    pub staircase: Vec<(f64, f64)>,
}

pub fn cobweb(
    e0: f64,
    lambda: f64,
    params: &ModelParams,
    n_steps: usize,
    curve_grid_n: usize,
) -> Result<CobwebPath> {
    if curve_grid_n < 2 {
        return Err(ModelError::InvalidArgument("curve grid needs at least 2 points".into()));
    }
    let lambda = check_lambda(lambda)?;
    let mut e = params.check_enrolment(e0)?;
    let upper = params.max_enrolment();
    let curve = (0..curve_grid_n)
        .map(|k| {
            let x = upper * k as f64 / (curve_grid_n - 1) as f64;
            Ok((x, gamma(x, lambda, params)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut staircase = Vec::with_capacity(2 * n_steps + 1);
    staircase.push((e, e));
    for _ in 0..n_steps {
        let next = gamma(e, lambda, params)?;
        staircase.push((e, next));
        staircase.push((next, next));
        e = next;
    }
    Ok(CobwebPath { curve, staircase })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum MapSpec {
    /// Enrolment map with a fixed follower share.
    OneD { lambda: f64 },
    /// Joint map with logit switching intensity `mu`.
    TwoD { mu: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub map: MapSpec,
    pub parameter: Param,
    pub range: (f64, f64),
    pub grid_points: usize,
    pub burn_in: usize,
    pub samples: usize,
    pub lyapunov_steps: usize,
    pub seed: State2D,
    /// Move `sigma_pi` together with `sigma` when sweeping `sigma`.
    pub tie_sigma_pi: bool,
    /// Start each cell from the last state of the previous one.
    pub continuation: bool,
    pub max_period: usize,
    pub period_tol: f64,
}

impl SweepSpec {
    pub fn new(map: MapSpec, parameter: Param, range: (f64, f64)) -> Self {
        SweepSpec {
            map,
            parameter,
            range,
            grid_points: DEFAULT_GRID_POINTS,
            burn_in: DEFAULT_BURN_IN,
            samples: DEFAULT_SAMPLES,
            lyapunov_steps: DEFAULT_LYAPUNOV_STEPS,
            seed: State2D::new(DEFAULT_E0, DEFAULT_LAMBDA0),
            tie_sigma_pi: true,
            continuation: false,
            max_period: MAX_PERIOD,
            period_tol: PERIOD_TOL,
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi) = self.range;
        let n = self.grid_points;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.grid_points < MIN_GRID_POINTS {
            return Err(ModelError::InvalidArgument(format!(
                "grid_points must be >= {MIN_GRID_POINTS}, got {}",
                self.grid_points
            )));
        }
        let (lo, hi) = self.range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(ModelError::InvalidArgument(format!("bad sweep range [{lo}, {hi}]")));
        }
        if self.samples == 0 {
            return Err(ModelError::InvalidArgument("samples must be >= 1".into()));
        }
        check_steps(self.lyapunov_steps)?;
        if !self.parameter.sweepable() {
            return Err(ModelError::InvalidArgument(format!(
                "`{}` cannot be swept",
                self.parameter.name()
            )));
        }
        match (self.map, self.parameter) {
            (MapSpec::OneD { .. }, Param::Mu) => Err(ModelError::InvalidArgument(
                "mu only affects the two-dimensional map".into(),
            )),
            (MapSpec::TwoD { .. }, Param::Lambda) => Err(ModelError::InvalidArgument(
                "lambda is a state variable of the two-dimensional map".into(),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellError {
    pub kind: String,
    pub message: String,
}

impl From<ModelError> for CellError {
    fn from(e: ModelError) -> Self {
        CellError {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub param_value: f64,
    /// Post-burn-in states; the 1-D map carries its fixed share in `lambda`.
    pub states: Vec<State2D>,
    pub lyapunov: Option<f64>,
    pub period: Option<Period>,
    pub error: Option<CellError>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationDiagram {
    pub spec: SweepSpec,
    pub cells: Vec<SweepCell>,
}

fn cell_inputs(spec: &SweepSpec, base: &ModelParams, value: f64) -> Result<(ModelParams, MapSpec)> {
    let mut params = *base;
    let mut map = spec.map;
    match (spec.parameter, &mut map) {
        (Param::Lambda, MapSpec::OneD { lambda }) => *lambda = value,
        (Param::Mu, MapSpec::TwoD { mu }) => *mu = value,
        (p, _) => {
            params.set(p, value);
            if p == Param::Sigma && spec.tie_sigma_pi {
                params.set(Param::SigmaPi, value);
            }
        }
    }
    params.validate()?;
    Ok((params, map))
}

fn run_cell(spec: &SweepSpec, base: &ModelParams, value: f64, seed: State2D) -> SweepCell {
    let mut cell = SweepCell {
        param_value: value,
        states: Vec::new(),
        lyapunov: None,
        period: None,
        error: None,
    };
    let outcome = (|| -> Result<()> {
        let (params, map) = cell_inputs(spec, base, value)?;
        match map {
            MapSpec::OneD { lambda } => {
                let t = iterate_1d(seed.e, lambda, &params, spec.samples, spec.burn_in)?;
                let tail = t.tail();
                cell.states = tail.iter().map(|&e| State2D::new(e, lambda)).collect();
                cell.period = Some(period_detect(tail, spec.max_period, spec.period_tol));
                let start = *t.last();
                cell.lyapunov =
                    Some(lyapunov_1d(start, lambda, &params, spec.lyapunov_steps, 0)?.exponent);
            }
            MapSpec::TwoD { mu } => {
                let t = iterate_2d(seed, &params, mu, spec.samples, spec.burn_in)?;
                cell.states = t.tail().to_vec();
                cell.period = Some(period_detect(t.tail(), spec.max_period, spec.period_tol));
                let start = *t.last();
                cell.lyapunov = Some(lyapunov_2d(start, &params, mu, spec.lyapunov_steps, 0)?.exponent);
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        cell.error = Some(e.into());
    }
    cell
}

/// Sweeps one parameter and records attractor samples, the largest
/// Lyapunov exponent and the detected period in every cell. Cell failures
/// are stored in the cell. `threads = None` uses the global rayon pool.
pub fn bifurcation_sweep(
    spec: &SweepSpec,
    params: &ModelParams,
    threads: Option<usize>,
) -> Result<BifurcationDiagram> {
    spec.validate()?;
    let grid = spec.grid();
    let cells = if spec.continuation {
        let mut seed = spec.seed;
        let mut cells = Vec::with_capacity(grid.len());
        for &v in &grid {
            let cell = run_cell(spec, params, v, seed);
            if let Some(last) = cell.states.last() {
                seed = *last;
            }
            cells.push(cell);
        }
        cells
    } else {
        let work = || {
            grid.par_iter()
                .map(|&v| run_cell(spec, params, v, spec.seed))
                .collect::<Vec<_>>()
        };
        match threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| ModelError::InvalidArgument(format!("thread pool: {e}")))?
                .install(work),
            None => work(),
        }
    };
    Ok(BifurcationDiagram {
        spec: spec.clone(),
        cells,
    })
}

/// A change of detected period between two cells with a period verdict.
/// Cells in between (if any) failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodTransition {
    pub from: Period,
    pub to: Period,
    pub lo: f64,
    pub hi: f64,
}

impl BifurcationDiagram {
    pub fn period_transitions(&self) -> Vec<PeriodTransition> {
        let mut out = Vec::new();
        let mut prev: Option<(Period, f64)> = None;
        for c in &self.cells {
            let Some(p) = c.period else { continue };
            if let Some((q, v)) = prev {
                if q != p {
                    out.push(PeriodTransition {
                        from: q,
                        to: p,
                        lo: v,
                        hi: c.param_value,
                    });
                }
            }
            prev = Some((p, c.param_value));
        }
        out
    }

    /// First pair of cells reading period 1 then period 2.
    pub fn first_flip(&self) -> Option<PeriodTransition> {
        self.period_transitions()
            .into_iter()
            .find(|t| t.from == Period::Cycle(1) && t.to == Period::Cycle(2))
    }

    pub fn error_count(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map1d::{fixed_points_1d, gamma_e, Classification};

    #[test]
    fn finite_difference_basics() {
        let d = finite_difference(|x| Ok(3.0 * x - 2.0), 0.7, 1e-6).unwrap();
        assert!((d.value - 3.0).abs() < 1e-9);
        let d = finite_difference(|x| Ok(x.exp()), 0.0, 1e-6).unwrap();
        assert!((d.value - 1.0).abs() < 1e-9);
        assert!(d.error < 1e-8);
    }

    #[test]
    fn finite_difference_brackets_gamma_slope() {
        let p = ModelParams::default();
        for e in [0.11, 0.37, 0.52, 0.74] {
            let d = finite_difference(|x| gamma(x, 0.5, &p), e, 1e-6).unwrap();
            let a = gamma_e(e, 0.5, &p).unwrap();
            assert!((d.value - a).abs() <= d.error, "{e}: {} vs {a} ± {}", d.value, d.error);
        }
    }

    #[test]
    fn period_detection_is_minimal() {
        assert_eq!(period_detect(&[0.4; 300], 64, 1e-8), Period::Cycle(1));
        let two: Vec<f64> = (0..300).map(|k| if k % 2 == 0 { 0.2 } else { 0.7 }).collect();
        assert_eq!(period_detect(&two, 64, 1e-8), Period::Cycle(2));
        let three: Vec<f64> = (0..300).map(|k| [0.1, 0.5, 0.3][k % 3]).collect();
        assert_eq!(period_detect(&three, 64, 1e-8), Period::Cycle(3));
        let drift: Vec<f64> = (0..300).map(|k| k as f64 * 1e-3).collect();
        assert_eq!(period_detect(&drift, 64, 1e-8), Period::Aperiodic);
    }

    #[test]
    fn bounds_grow_with_the_tail() {
        let xs = [0.3, 0.5, 0.1, 0.9, 0.4];
        let mut prev = attractor_bounds(&xs[..1]).unwrap()[0];
        for k in 2..=xs.len() {
            let b = attractor_bounds(&xs[..k]).unwrap()[0];
            assert!(b.0 <= prev.0 && b.1 >= prev.1);
            prev = b;
        }
        assert_eq!(prev, (0.1, 0.9));
        assert!(attractor_bounds::<f64>(&[]).is_err());
    }

    #[test]
    fn lyapunov_at_stable_fixed_point() {
        let p = ModelParams {
            sigma: 3.0,
            sigma_pi: 3.0,
            ..Default::default()
        };
        let fp = fixed_points_1d(0.5, &p, 2000)
            .unwrap()
            .into_iter()
            .find(|f| f.classification == Classification::Stable)
            .unwrap();
        let l = lyapunov_1d(fp.e_star, 0.5, &p, 10_000, 0).unwrap();
        assert!((l.exponent - fp.gamma_prime.value.abs().ln()).abs() < 1e-6);
        assert!(l.exponent < 0.0);
        assert_eq!(l.fallback_points, 0);
    }

    #[test]
    fn lyapunov_on_two_cycle_is_cycle_average() {
        let p = ModelParams {
            sigma: 8.0,
            sigma_pi: 8.0,
            ..Default::default()
        };
        let t = iterate_1d(0.3, 0.5, &p, 300, 4000).unwrap();
        assert_eq!(period_detect(t.tail(), 64, 1e-8), Period::Cycle(2));
        let (a, b) = (t.tail()[0], t.tail()[1]);
        let expected = 0.5 * (gamma_e(a, 0.5, &p).unwrap().abs().ln() + gamma_e(b, 0.5, &p).unwrap().abs().ln());
        let l = lyapunov_1d(a, 0.5, &p, 10_000, 0).unwrap();
        assert!((l.exponent - expected).abs() < 1e-6);
        assert!(l.exponent < 0.0);
    }

    #[test]
    fn lyapunov_2d_without_switching_matches_1d() {
        let p = ModelParams::default();
        let one = lyapunov_1d(0.3, 0.5, &p, 10_000, 100).unwrap();
        let two = lyapunov_2d(State2D::new(0.3, 0.5), &p, 0.0, 10_000, 100).unwrap();
        assert!((one.exponent - two.exponent).abs() < 1e-9, "{} {}", one.exponent, two.exponent);
        assert!(lyapunov_1d(0.3, 0.5, &p, 10, 0).is_err());
    }

    #[test]
    fn cobweb_shape() {
        let p = ModelParams::default();
        let c = cobweb(0.3, 0.5, &p, 25, 401).unwrap();
        assert_eq!(c.staircase.len(), 51);
        assert_eq!(c.curve.len(), 401);
        assert_eq!(c.staircase[0], (0.3, 0.3));
        for w in c.staircase.windows(2) {
            assert!(w[0].0 == w[1].0 || w[0].1 == w[1].1);
        }
    }

    #[test]
    fn cobweb_from_fixed_point_is_degenerate() {
        let p = ModelParams {
            sigma: 3.0,
            sigma_pi: 3.0,
            ..Default::default()
        };
        let fp = fixed_points_1d(0.5, &p, 2000).unwrap()[0].e_star;
        let c = cobweb(fp, 0.5, &p, 10, 10).unwrap();
        for &(x, y) in &c.staircase {
            assert!((x - fp).abs() < 1e-10 && (y - fp).abs() < 1e-10);
        }
    }

    fn small_sweep(map: MapSpec, param: Param, range: (f64, f64)) -> SweepSpec {
        SweepSpec {
            grid_points: 100,
            burn_in: 500,
            ..SweepSpec::new(map, param, range)
        }
    }

    #[test]
    fn sweep_records_cell_errors_and_keeps_order() {
        let p = ModelParams::default();
        let spec = small_sweep(MapSpec::OneD { lambda: 0.5 }, Param::Rho, (0.0, 2.0));
        let d = bifurcation_sweep(&spec, &p, Some(3)).unwrap();
        assert_eq!(d.cells.len(), 100);
        assert_eq!(d.cells[0].error.as_ref().unwrap().kind, "degenerate_weights");
        for (c, v) in d.cells.iter().zip(spec.grid()) {
            assert_eq!(c.param_value, v);
        }
        assert!(d.cells[1..].iter().all(|c| c.error.is_none()));
    }

    #[test]
    fn sweep_is_independent_of_thread_count() {
        let p = ModelParams::default();
        let spec = small_sweep(MapSpec::TwoD { mu: 2.0 }, Param::Sigma, (1.0, 10.0));
        let a = bifurcation_sweep(&spec, &p, Some(1)).unwrap();
        let b = bifurcation_sweep(&spec, &p, Some(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_rejects_bad_specs() {
        let p = ModelParams::default();
        let mut spec = small_sweep(MapSpec::OneD { lambda: 0.5 }, Param::Mu, (0.0, 2.0));
        assert!(bifurcation_sweep(&spec, &p, None).is_err());
        spec.parameter = Param::Sigma;
        spec.grid_points = 50;
        assert!(bifurcation_sweep(&spec, &p, None).is_err());
        let spec = small_sweep(MapSpec::TwoD { mu: 1.0 }, Param::Lambda, (0.0, 1.0));
        assert!(bifurcation_sweep(&spec, &p, None).is_err());
    }

    #[test]
    fn transitions_skip_failed_cells() {
        let cell = |v: f64, p: Option<Period>| SweepCell {
            param_value: v,
            states: vec![],
            lyapunov: None,
            period: p,
            error: None,
        };
        let d = BifurcationDiagram {
            spec: SweepSpec::new(MapSpec::OneD { lambda: 0.5 }, Param::Sigma, (0.0, 1.0)),
            cells: vec![
                cell(0.0, Some(Period::Cycle(1))),
                cell(0.1, None),
                cell(0.2, Some(Period::Cycle(2))),
                cell(0.3, Some(Period::Cycle(2))),
                cell(0.4, Some(Period::Aperiodic)),
            ],
        };
        let t = d.period_transitions();
        assert_eq!(t.len(), 2);
        let flip = d.first_flip().unwrap();
        assert_eq!((flip.lo, flip.hi), (0.0, 0.2));
    }
}
