//! Joint dynamics of enrolment and the follower share.
//!
//! `phi(E, lambda) = (gamma(E; lambda), V(E))` where `V` is a logit in the
//! indirect utilities of the two types. `V` does not depend on `lambda`, so
//! the Jacobian has a zero in its lower-right corner and fixed points reduce
//! to a scalar root problem `gamma(E; V(E)) = E`.

use serde::Serialize;

use crate::error::{ModelError, Result};
use crate::map1d::{gamma, gamma_e, scan_roots, Trajectory};
use crate::model::{
    check_lambda, indirect_utility, shares_at, shares_derivative_e, utility_derivative_e,
    weight_slopes, ModelParams,
};

/// Componentwise residual accepted for a fixed point.
pub const FIXED_POINT_RESIDUAL: f64 = 1e-10;
/// Margin on the Schur quantities.
pub const SCHUR_TOL: f64 = 1e-10;
/// `h*` below this makes the switching threshold unbounded.
pub const H_STAR_FLOOR: f64 = 1e-14;
/// Number of domain points used to bound the shares away from 0 and 1.
pub const SHARE_BOUND_GRID: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct State2D {
    pub e: f64,
    pub lambda: f64,
}

impl State2D {
    pub fn new(e: f64, lambda: f64) -> Self {
        State2D { e, lambda }
    }
}

fn check_mu(mu: f64) -> Result<f64> {
    if mu.is_finite() && mu >= 0.0 {
        Ok(mu)
    } else {
        Err(ModelError::InvalidParameter {
            name: "mu",
            value: mu,
            reason: "must be finite and >= 0",
        })
    }
}

/// Logit share of agents adopting the follower type next period.
pub fn switch_share(e: f64, params: &ModelParams, mu: f64) -> Result<f64> {
    let mu = check_mu(mu)?;
    if mu == 0.0 {
        return Ok(0.5);
    }
    let u = indirect_utility(e, params)?;
    let a = mu * u.follower;
    let b = mu * u.positional;
    let top = a.max(b);
    let ea = (a - top).exp();
    let eb = (b - top).exp();
    Ok(ea / (ea + eb))
}

pub fn phi(state: State2D, params: &ModelParams, mu: f64) -> Result<State2D> {
    let e = params.check_enrolment(state.e)?;
    let lambda = check_lambda(state.lambda)?;
    Ok(State2D {
        e: gamma(e, lambda, params)?,
        lambda: switch_share(e, params, mu)?,
    })
}

pub fn iterate_2d(
    state0: State2D,
    params: &ModelParams,
    mu: f64,
    n_steps: usize,
    burn_in: usize,
) -> Result<Trajectory<State2D>> {
    if n_steps == 0 {
        return Err(ModelError::InvalidArgument("n_steps must be >= 1".into()));
    }
    let mut x = State2D {
        e: params.check_enrolment(state0.e)?,
        lambda: check_lambda(state0.lambda)?,
    };
    let mut states = Vec::with_capacity(burn_in + n_steps + 1);
    states.push(x);
    for _ in 0..burn_in + n_steps {
        x = phi(x, params, mu)?;
        states.push(x);
    }
    Ok(Trajectory { states, burn_in })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jacobian2D {
    pub gamma_e: f64,
    pub gamma_lambda: f64,
    pub v_e: f64,
    pub v_lambda: f64,
    pub trace: f64,
    pub det: f64,
}

impl Jacobian2D {
    pub fn new(gamma_e: f64, gamma_lambda: f64, v_e: f64) -> Self {
        Jacobian2D {
            gamma_e,
            gamma_lambda,
            v_e,
            v_lambda: 0.0,
            trace: gamma_e,
            det: -gamma_lambda * v_e,
        }
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        let half = 0.5 * self.trace;
        let disc = half * half - self.det;
        if disc >= 0.0 {
            let r = disc.sqrt();
            (half + r).abs().max((half - r).abs())
        } else {
            self.det.sqrt()
        }
    }

    /// `J v` for a tangent vector `(dE, dlambda)`.
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.gamma_e * v[0] + self.gamma_lambda * v[1],
            self.v_e * v[0] + self.v_lambda * v[1],
        ]
    }
}

/// Jacobian at `state` with the logit level `v` supplied by the caller.
/// At a fixed point `v` equals the follower share.
pub fn jacobian_with_share(state: State2D, params: &ModelParams, mu: f64, v: f64) -> Result<Jacobian2D> {
    let mu = check_mu(mu)?;
    let e = params.check_enrolment(state.e)?;
    let lambda = check_lambda(state.lambda)?;
    let g_e = gamma_e(e, lambda, params)?;
    let s = shares_at(e, params)?;
    let g_lambda = params.max_enrolment() * (s.follower - s.positional);
    let v_e = if mu == 0.0 {
        0.0
    } else {
        let du = utility_derivative_e(e, params)?;
        mu * v * (1.0 - v) * (du.follower - du.positional)
    };
    Ok(Jacobian2D::new(g_e, g_lambda, v_e))
}

pub fn jacobian_2d(state: State2D, params: &ModelParams, mu: f64) -> Result<Jacobian2D> {
    let v = switch_share(state.e, params, mu)?;
    jacobian_with_share(state, params, mu, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BifurcationKind {
    SaddleNode,
    Flip,
    NeimarkSacker,
}

impl BifurcationKind {
    pub fn name(self) -> &'static str {
        match self {
            BifurcationKind::SaddleNode => "saddle-node",
            BifurcationKind::Flip => "flip",
            BifurcationKind::NeimarkSacker => "neimark-sacker",
        }
    }
}

/// Schur-Cohn quantities of a 2x2 Jacobian and the closest local
/// bifurcation curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchurReport {
    pub jacobian: Jacobian2D,
    /// `1 - trace + det`
    pub schur_1: f64,
    /// `1 + trace + det`
    pub schur_2: f64,
    /// `1 - det`
    pub schur_3: f64,
    pub stable: bool,
    /// Some Schur quantity lies within the tolerance of zero.
    pub nonhyperbolic: bool,
    pub spectral_radius: f64,
    pub nearest_bifurcation: BifurcationKind,
    pub bifurcation_residual: f64,
}

impl SchurReport {
    pub fn from_jacobian(jacobian: Jacobian2D) -> Self {
        let (t, d) = (jacobian.trace, jacobian.det);
        let schur = [1.0 - t + d, 1.0 + t + d, 1.0 - d];
        let stable = schur.iter().all(|&q| q > SCHUR_TOL);
        let nonhyperbolic = schur.iter().any(|&q| q.abs() <= SCHUR_TOL);

        let gl_ve = jacobian.gamma_lambda * jacobian.v_e;
        let mut candidates = vec![
            (BifurcationKind::SaddleNode, 1.0 - jacobian.gamma_e - gl_ve),
            (BifurcationKind::Flip, 1.0 + jacobian.gamma_e - gl_ve),
        ];
        if jacobian.gamma_e > -2.0 && jacobian.gamma_e < 2.0 {
            candidates.push((BifurcationKind::NeimarkSacker, -gl_ve - 1.0));
        }
        let (kind, residual) = candidates
            .into_iter()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("at least two candidates");

        SchurReport {
            jacobian,
            schur_1: schur[0],
            schur_2: schur[1],
            schur_3: schur[2],
            stable,
            nonhyperbolic,
            spectral_radius: jacobian.spectral_radius(),
            nearest_bifurcation: kind,
            bifurcation_residual: residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub state: State2D,
    pub schur: SchurReport,
    /// `None` when the threshold is undefined at this point (e.g. `g* >= 1`).
    pub mu_threshold: Option<MuThreshold>,
    pub mu_threshold_note: Option<String>,
}

fn fixed_point_residual(state: State2D, params: &ModelParams, mu: f64) -> Result<f64> {
    let next = phi(state, params, mu)?;
    Ok((next.e - state.e).abs().max((next.lambda - state.lambda).abs()))
}

pub fn schur_stability(state_star: State2D, params: &ModelParams, mu: f64) -> Result<StabilityReport> {
    let residual = fixed_point_residual(state_star, params, mu)?;
    if residual > FIXED_POINT_RESIDUAL {
        return Err(ModelError::NotAFixedPoint(residual));
    }
    let jac = jacobian_2d(state_star, params, mu)?;
    let (mu_threshold, mu_threshold_note) = match mu_threshold(state_star, params) {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(StabilityReport {
        state: state_star,
        schur: SchurReport::from_jacobian(jac),
        mu_threshold,
        mu_threshold_note,
    })
}

/// Sufficient bound on the willingness to switch that preserves stability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuThreshold {
    /// `|gamma_E|` at the point.
    pub g_star: f64,
    /// `|U_F,E - U_P,E|` at the point.
    pub h_star: f64,
    /// Upper bound on `g*` from the larger share slope.
    pub g_hat: f64,
    /// Upper bound on `h*` from bounding the log terms over the share range.
    pub h_hat: f64,
    pub at_point: f64,
    /// Zero when `g_hat >= 1` (no guarantee from the bounds).
    pub conservative: f64,
    /// `[min, max]` of `s_F` and `s_P` used for the log bounds.
    pub follower_share_range: (f64, f64),
    pub positional_share_range: (f64, f64),
}

fn share_ranges(params: &ModelParams, include: (f64, f64)) -> Result<((f64, f64), (f64, f64))> {
    let upper = params.max_enrolment();
    let mut f = (include.0, include.0);
    let mut p = (include.1, include.1);
    for k in 0..SHARE_BOUND_GRID {
        let e = upper * (k as f64 + 0.5) / SHARE_BOUND_GRID as f64;
        let s = shares_at(e, params)?;
        f = (f.0.min(s.follower), f.1.max(s.follower));
        p = (p.0.min(s.positional), p.1.max(s.positional));
    }
    Ok((f, p))
}

/// `max |c + log s|` over `s` in `[lo, hi]` (monotone in `s`).
fn log_bound(c: f64, lo: f64, hi: f64) -> f64 {
    (c + lo.ln()).abs().max((c + hi.ln()).abs())
}

pub fn mu_threshold(state_star: State2D, params: &ModelParams) -> Result<MuThreshold> {
    let e = params.check_enrolment(state_star.e)?;
    let lambda = check_lambda(state_star.lambda)?;
    let g_star = gamma_e(e, lambda, params)?.abs();
    if g_star >= 1.0 {
        return Err(ModelError::GStarNotBelowOne(g_star));
    }
    let du = utility_derivative_e(e, params)?;
    let h_star = (du.follower - du.positional).abs();
    if h_star <= H_STAR_FLOOR {
        return Err(ModelError::HStarZero);
    }
    let scale = 4.0 * params.price_education / params.income;
    let at_point = scale * (1.0 - g_star) / h_star;

    let ds = shares_derivative_e(e, params)?;
    let g_hat = params.max_enrolment() * ds.follower.abs().max(ds.positional.abs());

    let s = shares_at(e, params)?;
    let (fr, pr) = share_ranges(params, (s.follower, s.positional))?;
    let d = weight_slopes(e, params)?;
    let log_e = (params.income / params.price_education).ln();
    let log_c = (params.income / params.price_consumption).ln();
    let bound = |da: f64, db: f64, (lo, hi): (f64, f64)| {
        da.abs() * log_bound(log_e, lo, hi) + db.abs() * log_bound(log_c, 1.0 - hi, 1.0 - lo)
    };
    let h_hat = bound(d.alpha_f, d.beta_f, fr) + bound(d.alpha_p, d.beta_p, pr);
    let conservative = if g_hat < 1.0 && h_hat.is_finite() {
        scale * (1.0 - g_hat) / h_hat
    } else {
        0.0
    };

    Ok(MuThreshold {
        g_star,
        h_star,
        g_hat,
        h_hat,
        at_point,
        conservative,
        follower_share_range: fr,
        positional_share_range: pr,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint2D {
    pub state: State2D,
    pub residual: f64,
    /// Fails where the linearisation is unavailable (kink, boundary share).
    pub stability: Result<StabilityReport>,
}

pub fn fixed_points_2d(params: &ModelParams, mu: f64, grid_n: usize) -> Result<Vec<FixedPoint2D>> {
    if grid_n < 200 {
        return Err(ModelError::InvalidArgument("grid_n must be >= 200".into()));
    }
    let mu = check_mu(mu)?;
    let roots = scan_roots(params.max_enrolment(), grid_n, 0.0, |e| {
        let v = switch_share(e, params, mu)?;
        Ok(gamma(e, v, params)? - e)
    })?;
    roots
        .into_iter()
        .map(|e| {
            let state = State2D::new(e, switch_share(e, params, mu)?);
            let residual = fixed_point_residual(state, params, mu)?;
            let stability = schur_stability(state, params, mu);
            Ok(FixedPoint2D {
                state,
                residual,
                stability,
            })
        })
        .collect()
}
