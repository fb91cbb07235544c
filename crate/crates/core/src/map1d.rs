//! The aggregate-enrolment map with a fixed population mix.
//!
//! `gamma(E; lambda) = (I/p_e) [lambda s_F(E) + (1 - lambda) s_P(E)]`.
//! Fixed points are located by a sign scan of `gamma(E) - E` followed by
//! bisection; the trapping interval of a unimodal map is built from its
//! critical point.

use serde::Serialize;

use crate::error::{ModelError, Result};
use crate::model::{
    check_lambda, premium_regime, shares_at, shares_derivative_e, ModelParams, PremiumRegime,
};

/// Bisection stops once the bracket is this narrow.
pub const BISECTION_WIDTH: f64 = 1e-12;
/// Roots closer than this are merged.
pub const DEDUP_RADIUS: f64 = 1e-9;
/// Half-width of the band around `|slope| = 1` reported as nonhyperbolic.
pub const HYPERBOLICITY_BAND: f64 = 1e-8;
/// Slack used when checking interval membership.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

pub fn gamma(e: f64, lambda: f64, params: &ModelParams) -> Result<f64> {
    let e = params.check_enrolment(e)?;
    let lambda = check_lambda(lambda)?;
    let s = shares_at(e, params)?;
    Ok(params.max_enrolment() * (lambda * s.follower + (1.0 - lambda) * s.positional))
}

/// A derivative value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slope {
    pub value: f64,
    /// False when the closed form was unavailable and a finite difference
    /// was used instead.
    pub analytic: bool,
}

/// Analytic `d gamma / dE` (requires a point away from the premium kink).
pub fn gamma_e(e: f64, lambda: f64, params: &ModelParams) -> Result<f64> {
    let lambda = check_lambda(lambda)?;
    let d = shares_derivative_e(e, params)?;
    Ok(params.max_enrolment() * (lambda * d.follower + (1.0 - lambda) * d.positional))
}

/// `d gamma / dE`, analytic where possible, one-sided or central finite
/// difference near the kink.
pub fn gamma_slope(e: f64, lambda: f64, params: &ModelParams) -> Result<Slope> {
    match gamma_e(e, lambda, params) {
        Ok(value) => Ok(Slope {
            value,
            analytic: true,
        }),
        Err(ModelError::KinkProximity { .. }) => {
            let upper = params.max_enrolment();
            let h = params.tol.fd_step * e.abs().max(1.0);
            let lo = (e - h).max(0.0);
            let hi = (e + h).min(upper);
            let value = (gamma(hi, lambda, params)? - gamma(lo, lambda, params)?) / (hi - lo);
            Ok(Slope {
                value,
                analytic: false,
            })
        }
        Err(other) => Err(other),
    }
}

/// An orbit `x_0, x_1, ..., x_{burn_in + n_steps}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory<S> {
    pub states: Vec<S>,
    pub burn_in: usize,
}

impl<S> Trajectory<S> {
    /// States after the burn-in window (the burn-in endpoint is excluded).
    pub fn tail(&self) -> &[S] {
        &self.states[(self.burn_in + 1).min(self.states.len())..]
    }

    pub fn last(&self) -> &S {
        self.states.last().expect("trajectory is never empty")
    }
}

impl Trajectory<f64> {
    /// Minimum and maximum over the post-burn-in window.
    pub fn tail_range(&self) -> (f64, f64) {
        self.tail()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            })
    }
}

pub fn iterate_1d(
    e0: f64,
    lambda: f64,
    params: &ModelParams,
    n_steps: usize,
    burn_in: usize,
) -> Result<Trajectory<f64>> {
    if n_steps == 0 {
        return Err(ModelError::InvalidArgument("n_steps must be >= 1".into()));
    }
    let mut e = params.check_enrolment(e0)?;
    check_lambda(lambda)?;
    let mut states = Vec::with_capacity(burn_in + n_steps + 1);
    states.push(e);
    for _ in 0..burn_in + n_steps {
        e = gamma(e, lambda, params)?;
        states.push(e);
    }
    Ok(Trajectory { states, burn_in })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Stable,
    Unstable,
    Nonhyperbolic,
}

impl Classification {
    pub fn from_modulus(modulus: f64) -> Self {
        if (modulus - 1.0).abs() <= HYPERBOLICITY_BAND {
            Classification::Nonhyperbolic
        } else if modulus < 1.0 {
            Classification::Stable
        } else {
            Classification::Unstable
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Classification::Stable => "stable",
            Classification::Unstable => "unstable",
            Classification::Nonhyperbolic => "nonhyperbolic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint1D {
    pub e_star: f64,
    pub gamma_prime: Slope,
    pub classification: Classification,
    pub regime: PremiumRegime,
}

/// Sign-change scan of `f` on a uniform grid of `grid_n` points over
/// `[0, upper]`, each bracket refined by bisection. Shared with the 2-D
/// fixed-point search.
pub(crate) fn scan_roots(
    upper: f64,
    grid_n: usize,
    width: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<Vec<f64>> {
    let xs: Vec<f64> = (0..grid_n)
        .map(|k| upper * k as f64 / (grid_n - 1) as f64)
        .collect();
    let mut fs = Vec::with_capacity(grid_n);
    for &x in &xs {
        fs.push(f(x)?);
    }
    let mut roots = Vec::new();
    for k in 0..grid_n {
        if fs[k] == 0.0 {
            roots.push(xs[k]);
            continue;
        }
        if k + 1 < grid_n && fs[k + 1] != 0.0 && (fs[k] < 0.0) != (fs[k + 1] < 0.0) {
            roots.push(bisect(xs[k], xs[k + 1], fs[k], width, &mut f)?);
        }
    }
    let mut merged: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        match merged.last() {
            Some(&prev) if (r - prev).abs() < DEDUP_RADIUS => {}
            _ => merged.push(r),
        }
    }
    Ok(merged)
}

fn bisect(
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    width: f64,
    f: &mut impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    let mut f_hi = f(hi)?;
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

pub fn fixed_points_1d(lambda: f64, params: &ModelParams, grid_n: usize) -> Result<Vec<FixedPoint1D>> {
    if grid_n < 1000 {
        return Err(ModelError::InvalidArgument("grid_n must be >= 1000".into()));
    }
    check_lambda(lambda)?;
    let roots = scan_roots(params.max_enrolment(), grid_n, BISECTION_WIDTH, |e| {
        Ok(gamma(e, lambda, params)? - e)
    })?;
    roots
        .into_iter()
        .map(|e_star| {
            let gamma_prime = gamma_slope(e_star, lambda, params)?;
            Ok(FixedPoint1D {
                e_star,
                gamma_prime,
                classification: Classification::from_modulus(gamma_prime.value.abs()),
                regime: premium_regime(e_star, params),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExistenceCase {
    /// `p_e <= p_c`: a fixed point always exists.
    CheapEducation,
    /// `p_e > p_c` and the follower-share bound holds.
    BoundedFollowerShare,
    /// The sufficient condition fails; a fixed point may still exist.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExistenceReport {
    pub case: ExistenceCase,
    pub s_value: Option<f64>,
    pub lambda_bound: Option<f64>,
    /// False when `rho != rho_pi` or `sigma != sigma_pi`, in which case the
    /// sufficient condition is evaluated outside its stated premise.
    pub premise_holds: bool,
}

/// Sufficient condition for a fixed point to exist.
///
/// The boundary inequality is read as `lambda + (1 - lambda) S <= 1`
/// (i.e. `gamma(I/p_e) <= I/p_e` with the prefactor divided out).
pub fn existence_condition(lambda: f64, params: &ModelParams) -> ExistenceReport {
    let p = params;
    let premise_holds = p.rho == p.rho_pi && p.sigma == p.sigma_pi;
    if p.price_education <= p.price_consumption {
        return ExistenceReport {
            case: ExistenceCase::CheapEducation,
            s_value: None,
            lambda_bound: None,
            premise_holds,
        };
    }
    let exponent = p.sigma * p.max_enrolment() * (1.0 - p.kappa) - p.sigma * p.pi_bar;
    // logistic(exponent) without overflow
    let s = if exponent >= 0.0 {
        1.0 / (1.0 + (-exponent).exp())
    } else {
        let z = exponent.exp();
        z / (1.0 + z)
    };
    let ratio = p.price_consumption / p.price_education;
    let bound = if s < 1.0 {
        (ratio - s) / (1.0 - s)
    } else {
        f64::NEG_INFINITY
    };
    ExistenceReport {
        case: if lambda < bound {
            ExistenceCase::BoundedFollowerShare
        } else {
            ExistenceCase::Inconclusive
        },
        s_value: Some(s),
        lambda_bound: Some(bound),
        premise_holds,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub e: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Unimodality {
    Unimodal,
    Monotone,
    Multimodal { maxima: usize, minima: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPointScan {
    pub points: Vec<CriticalPoint>,
    pub verdict: Unimodality,
}

impl CriticalPointScan {
    pub fn is_unimodal(&self) -> bool {
        self.verdict == Unimodality::Unimodal
    }
}

const GOLDEN_TOL: f64 = 1e-10;

/// Golden-section search for an extremum of `f` on `[a, b]`.
fn golden_section(
    mut a: f64,
    mut b: f64,
    kind: ExtremumKind,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let sign = match kind {
        ExtremumKind::Max => -1.0,
        ExtremumKind::Min => 1.0,
    };
    let g = |x: f64| f(x).map(|v| sign * v);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut gc = g(c)?;
    let mut gd = g(d)?;
    while b - a > GOLDEN_TOL {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Locates interior extrema of `gamma` from sign changes of its discrete
/// slope on a uniform grid, refined by golden-section search.
pub fn critical_points(lambda: f64, params: &ModelParams, grid_n: usize) -> Result<CriticalPointScan> {
    if grid_n < 10_000 {
        return Err(ModelError::InvalidArgument("grid_n must be >= 10000".into()));
    }
    check_lambda(lambda)?;
    let upper = params.max_enrolment();
    let xs: Vec<f64> = (0..grid_n)
        .map(|k| upper * k as f64 / (grid_n - 1) as f64)
        .collect();
    let mut ys = Vec::with_capacity(grid_n);
    for &x in &xs {
        ys.push(gamma(x, lambda, params)?);
    }
    let diffs: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).collect();

    let mut points = Vec::new();
    let mut last_sign = 0.0;
    let mut last_idx = 0;
    for (k, &d) in diffs.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        let sign = d.signum();
        if last_sign != 0.0 && sign != last_sign {
            let kind = if last_sign > 0.0 {
                ExtremumKind::Max
            } else {
                ExtremumKind::Min
            };
            // extremum lies between the start of the previous rising/falling
            // step and the end of the current one
            let a = xs[last_idx];
            let b = xs[k + 1];
            let e = golden_section(a, b, kind, |x| gamma(x, lambda, params))?;
            points.push(CriticalPoint { e, kind });
        }
        last_sign = sign;
        last_idx = k;
    }
    let maxima = points.iter().filter(|p| p.kind == ExtremumKind::Max).count();
    let minima = points.len() - maxima;
    let verdict = match (maxima, minima) {
        (0, 0) => Unimodality::Monotone,
        (1, 0) => Unimodality::Unimodal,
        (maxima, minima) => Unimodality::Multimodal { maxima, minima },
    };
    Ok(CriticalPointScan { points, verdict })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbsorbingInterval {
    pub e_c: f64,
    pub e_max: f64,
    pub e_min: f64,
    /// Unimodality was certified and the sampled invariance checks passed.
    pub unimodal_certified: bool,
}

impl AbsorbingInterval {
    pub fn contains(&self, e: f64, tol: f64) -> bool {
        e >= self.e_min - tol && e <= self.e_max + tol
    }
}

/// Grid used to certify unimodality before building the trapping interval.
pub const ABSORBING_SCAN_GRID: usize = 10_000;
/// Number of samples used to verify invariance and absorption.
pub const ABSORBING_SAMPLES: usize = 10_000;

/// `J = [gamma^2(E_c), gamma(E_c)]` for a unimodal map, with sampled checks
/// of `gamma(J) ⊆ J` and `gamma^2(D) ⊆ J`.
pub fn absorbing_interval(lambda: f64, params: &ModelParams) -> Result<AbsorbingInterval> {
    let scan = critical_points(lambda, params, ABSORBING_SCAN_GRID)?;
    let e_c = match scan.verdict {
        Unimodality::Unimodal => scan.points[0].e,
        Unimodality::Monotone => {
            return Err(ModelError::UnimodalityNotCertified("monotone".into()))
        }
        Unimodality::Multimodal { maxima, minima } => {
            return Err(ModelError::UnimodalityNotCertified(format!(
                "{maxima} interior maxima and {minima} interior minima"
            )))
        }
    };
    let e_max = gamma(e_c, lambda, params)?;
    let e_min = gamma(e_max, lambda, params)?;
    let mut interval = AbsorbingInterval {
        e_c,
        e_max,
        e_min,
        unimodal_certified: false,
    };

    let n = ABSORBING_SAMPLES;
    let upper = params.max_enrolment();
    let mut ok = true;
    for k in 0..n {
        let t = k as f64 / (n - 1) as f64;
        let inside = e_min + (e_max - e_min) * t;
        if !interval.contains(gamma(inside, lambda, params)?, MEMBERSHIP_TOL) {
            ok = false;
            break;
        }
        let anywhere = upper * t;
        let twice = gamma(gamma(anywhere, lambda, params)?, lambda, params)?;
        if !interval.contains(twice, MEMBERSHIP_TOL) {
            ok = false;
            break;
        }
    }
    interval.unimodal_certified = ok;
    Ok(interval)
}

/// Implicit-function response of a stable fixed point to `kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaResponse {
    pub d_e_star_d_kappa: f64,
    /// `partial gamma / partial kappa` by central difference in `kappa`.
    pub gamma_kappa: f64,
    /// The same quantity as `-E * partial gamma / partial pi_bar`.
    pub gamma_kappa_via_premium: f64,
    pub gamma_e: f64,
}

pub fn comparative_statics_kappa(
    e_star: f64,
    lambda: f64,
    params: &ModelParams,
) -> Result<KappaResponse> {
    let e_star = params.check_enrolment(e_star)?;
    match premium_regime(e_star, params) {
        PremiumRegime::Saturated => {
            return Ok(KappaResponse {
                d_e_star_d_kappa: 0.0,
                gamma_kappa: 0.0,
                gamma_kappa_via_premium: 0.0,
                gamma_e: gamma_e(e_star, lambda, params)?,
            })
        }
        PremiumRegime::Kink => return Err(ModelError::SaturatedRegime),
        PremiumRegime::Interior => {}
    }
    if params.pi_bar - params.kappa * e_star <= 0.0 {
        return Err(ModelError::SaturatedRegime);
    }
    let slope = gamma_e(e_star, lambda, params)?;
    if slope.abs() >= 1.0 - HYPERBOLICITY_BAND {
        return Err(ModelError::NotStable(slope.abs()));
    }

    let h_kappa = params.tol.fd_step * params.kappa.abs().max(1.0);
    let kappa_lo = (params.kappa - h_kappa).max(0.0);
    let kappa_hi = params.kappa + h_kappa;
    let with_kappa = |k: f64| {
        let p = ModelParams { kappa: k, ..*params };
        gamma(e_star, lambda, &p)
    };
    let gamma_kappa = (with_kappa(kappa_hi)? - with_kappa(kappa_lo)?) / (kappa_hi - kappa_lo);

    let h_pi = params.tol.fd_step * params.pi_bar.abs().max(1.0);
    let with_pi_bar = |pb: f64| {
        let p = ModelParams { pi_bar: pb, ..*params };
        gamma(e_star, lambda, &p)
    };
    let gamma_pi = (with_pi_bar(params.pi_bar + h_pi)? - with_pi_bar(params.pi_bar - h_pi)?)
        / (2.0 * h_pi);
    let gamma_kappa_via_premium = -e_star * gamma_pi;

    let d = gamma_kappa / (1.0 - slope);
    if d > 0.0 {
        return Err(ModelError::SignViolation(d));
    }
    Ok(KappaResponse {
        d_e_star_d_kappa: d,
        gamma_kappa,
        gamma_kappa_via_premium,
        gamma_e: slope,
    })
}
