//! Model primitives: parameters, wage premium, consumption identity,
//! endogenous preference weights, education shares and indirect utilities,
//! together with their analytic derivatives in aggregate enrolment.
//!
//! Every function is a pure function of `(E, ModelParams)`. Enrolment `E`
//! lives on the domain `[0, I/p_e]`; values within `tol.domain` outside the
//! domain are clamped, anything further out is rejected.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Numerical tolerances shared by the model, the maps and the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Smallest admissible `alpha + beta` before a share is declared undefined.
    pub denominator: f64,
    /// Weights at or below this are treated as zero in `w * log(share)` terms.
    pub weight: f64,
    /// Exclusion radius around the premium kink `E = pi_bar / kappa`.
    pub kink: f64,
    /// Relative finite-difference step.
    pub fd_step: f64,
    /// Slack on the enrolment domain.
    pub domain: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            denominator: 1e-300,
            weight: 1e-14,
            kink: 1e-9,
            fd_step: 1e-6,
            domain: 1e-12,
        }
    }
}

/// Structural constants of the economy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub income: f64,
    pub price_education: f64,
    pub price_consumption: f64,
    /// Follower imitation reactivity.
    pub rho: f64,
    /// Follower premium reactivity.
    pub rho_pi: f64,
    /// Positional distinction reactivity.
    pub sigma: f64,
    /// Positional premium reactivity.
    pub sigma_pi: f64,
    /// Sensitivity of the premium to the supply of educated workers.
    pub kappa: f64,
    /// Maximum wage premium.
    pub pi_bar: f64,
    #[serde(default)]
    pub tol: Tolerances,
}

impl Default for ModelParams {
    /// The baseline calibration used throughout the bifurcation figures
    /// (no follower premium reactivity, `sigma_pi = sigma`).
    fn default() -> Self {
        ModelParams {
            income: 1.0,
            price_education: 1.2,
            price_consumption: 0.53,
            rho: 0.98,
            rho_pi: 0.0,
            sigma: 16.5,
            sigma_pi: 16.5,
            kappa: 0.3,
            pi_bar: 100.0,
            tol: Tolerances::default(),
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

impl ModelParams {
    /// Checks every bound; construction sites call this before use.
    pub fn validate(&self) -> Result<()> {
        positive("income", self.income)?;
        positive("price_education", self.price_education)?;
        positive("price_consumption", self.price_consumption)?;
        non_negative("rho", self.rho)?;
        non_negative("rho_pi", self.rho_pi)?;
        non_negative("sigma", self.sigma)?;
        non_negative("sigma_pi", self.sigma_pi)?;
        non_negative("kappa", self.kappa)?;
        positive("pi_bar", self.pi_bar)?;
        let t = &self.tol;
        non_negative("tol.denominator", t.denominator)?;
        non_negative("tol.weight", t.weight)?;
        non_negative("tol.kink", t.kink)?;
        positive("tol.fd_step", t.fd_step)?;
        non_negative("tol.domain", t.domain)?;
        let upper = self.max_enrolment();
        if !(upper.is_finite() && upper > 0.0) {
            return Err(ModelError::InvalidParameter {
                name: "price_education",
                value: self.price_education,
                reason: "income / price_education must be finite and > 0",
            });
        }
        Ok(())
    }

    pub fn validated(self) -> Result<Self> {
        self.validate().map(|_| self)
    }

    /// Upper end of the enrolment domain, `I / p_e`.
    pub fn max_enrolment(&self) -> f64 {
        self.income / self.price_education
    }

    /// Enrolment at which the premium clamp starts to bind, if any.
    pub fn kink(&self) -> Option<f64> {
        (self.kappa > 0.0).then(|| self.pi_bar / self.kappa)
    }

    /// Returns `e` clamped to the domain, or an error when it lies outside
    /// by more than the domain tolerance.
    pub fn check_enrolment(&self, e: f64) -> Result<f64> {
        let upper = self.max_enrolment();
        let slack = self.tol.domain * upper.max(1.0);
        if e.is_nan() || e < -slack || e > upper + slack {
            return Err(ModelError::OutOfDomain { value: e, upper });
        }
        Ok(e.clamp(0.0, upper))
    }

    /// Reads a parameter by name. `Lambda` and `Mu` live in [`PopulationMix`].
    pub fn get(&self, param: Param) -> Option<f64> {
        Some(match param {
            Param::Income => self.income,
            Param::PriceEducation => self.price_education,
            Param::PriceConsumption => self.price_consumption,
            Param::Rho => self.rho,
            Param::RhoPi => self.rho_pi,
            Param::Sigma => self.sigma,
            Param::SigmaPi => self.sigma_pi,
            Param::Kappa => self.kappa,
            Param::PiBar => self.pi_bar,
            Param::Lambda | Param::Mu => return None,
        })
    }

    /// Writes a parameter by name; returns `false` for population parameters.
    pub fn set(&mut self, param: Param, value: f64) -> bool {
        let slot = match param {
            Param::Income => &mut self.income,
            Param::PriceEducation => &mut self.price_education,
            Param::PriceConsumption => &mut self.price_consumption,
            Param::Rho => &mut self.rho,
            Param::RhoPi => &mut self.rho_pi,
            Param::Sigma => &mut self.sigma,
            Param::SigmaPi => &mut self.sigma_pi,
            Param::Kappa => &mut self.kappa,
            Param::PiBar => &mut self.pi_bar,
            Param::Lambda | Param::Mu => return false,
        };
        *slot = value;
        true
    }
}

/// Population composition: follower share and willingness to switch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationMix {
    pub lambda: f64,
    pub mu: f64,
}

impl Default for PopulationMix {
    fn default() -> Self {
        PopulationMix {
            lambda: 0.5,
            mu: 0.0,
        }
    }
}

impl PopulationMix {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        check_lambda(lambda)?;
        non_negative("mu", mu)?;
        Ok(PopulationMix { lambda, mu })
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(lambda)
    } else {
        Err(ModelError::ShareOutOfRange(lambda))
    }
}

/// Named scalar parameters that can be swept or overridden.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Income,
    PriceEducation,
    PriceConsumption,
    Rho,
    RhoPi,
    Sigma,
    SigmaPi,
    Kappa,
    PiBar,
    Lambda,
    Mu,
}

impl Param {
    pub const ALL: [Param; 11] = [
        Param::Income,
        Param::PriceEducation,
        Param::PriceConsumption,
        Param::Rho,
        Param::RhoPi,
        Param::Sigma,
        Param::SigmaPi,
        Param::Kappa,
        Param::PiBar,
        Param::Lambda,
        Param::Mu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Income => "income",
            Param::PriceEducation => "price_education",
            Param::PriceConsumption => "price_consumption",
            Param::Rho => "rho",
            Param::RhoPi => "rho_pi",
            Param::Sigma => "sigma",
            Param::SigmaPi => "sigma_pi",
            Param::Kappa => "kappa",
            Param::PiBar => "pi_bar",
            Param::Lambda => "lambda",
            Param::Mu => "mu",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Param::Income | Param::PiBar => "currency/period",
            Param::PriceEducation | Param::PriceConsumption => "currency/unit",
            _ => "dimensionless",
        }
    }

    /// Parameters that may be swept by the bifurcation driver.
    pub fn sweepable(self) -> bool {
        matches!(
            self,
            Param::Rho
                | Param::RhoPi
                | Param::Sigma
                | Param::SigmaPi
                | Param::Kappa
                | Param::Lambda
                | Param::Mu
                | Param::PiBar
        )
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ModelError::InvalidArgument(format!("unknown parameter `{s}`")))
    }
}

/// Which branch of the premium clamp an enrolment level sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PremiumRegime {
    Interior,
    Saturated,
    Kink,
}

impl PremiumRegime {
    pub fn name(self) -> &'static str {
        match self {
            PremiumRegime::Interior => "interior",
            PremiumRegime::Saturated => "saturated",
            PremiumRegime::Kink => "kink",
        }
    }
}

pub fn premium_regime(e: f64, params: &ModelParams) -> PremiumRegime {
    match params.kink() {
        Some(k) if (e - k).abs() <= params.tol.kink => PremiumRegime::Kink,
        Some(k) if e > k => PremiumRegime::Saturated,
        _ => PremiumRegime::Interior,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Premium {
    pub value: f64,
    /// True when the zero floor binds.
    pub saturated: bool,
}

/// `max(pi_bar - kappa * E, 0)`.
pub fn wage_premium(e: f64, params: &ModelParams) -> Result<Premium> {
    let e = params.check_enrolment(e)?;
    let raw = params.pi_bar - params.kappa * e;
    Ok(if raw < 0.0 {
        Premium {
            value: 0.0,
            saturated: true,
        }
    } else {
        Premium {
            value: raw,
            saturated: false,
        }
    })
}

/// Aggregate consumption implied by the budget line, `I/p_c - (p_e/p_c) E`.
pub fn consumption_of(e: f64, params: &ModelParams) -> Result<f64> {
    let e = params.check_enrolment(e)?;
    let c = (params.income - params.price_education * e) / params.price_consumption;
    Ok(c.max(0.0))
}

/// The four Cobb-Douglas weights at a given enrolment level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreferenceWeights {
    pub alpha_f: f64,
    pub beta_f: f64,
    pub alpha_p: f64,
    pub beta_p: f64,
}

/// `1 - exp(-x)` without cancellation for small `x`.
fn one_minus_exp_neg(x: f64) -> f64 {
    -(-x).exp_m1()
}

pub fn preference_weights(e: f64, params: &ModelParams) -> Result<PreferenceWeights> {
    let e = params.check_enrolment(e)?;
    let premium = wage_premium(e, params)?.value;
    let c = consumption_of(e, params)?;
    let p = params;
    Ok(PreferenceWeights {
        alpha_f: one_minus_exp_neg(p.rho * e + p.rho_pi * premium),
        beta_f: one_minus_exp_neg(p.rho * c),
        alpha_p: (-p.sigma * e).exp() * one_minus_exp_neg(p.sigma_pi * premium),
        beta_p: (-p.sigma * c).exp(),
    })
}

/// A pair of values, one per behavioural type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ByType<T> {
    pub follower: T,
    pub positional: T,
}

impl<T> ByType<T> {
    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> ByType<U> {
        ByType {
            follower: f(self.follower),
            positional: f(self.positional),
        }
    }
}

/// Education expenditure shares `s_i = alpha_i / (alpha_i + beta_i)`.
pub type TypeShares = ByType<f64>;

/// Type-specific indirect utility levels.
pub type IndirectUtility = ByType<f64>;

fn share(alpha: f64, beta: f64, agent: &'static str, tol: &Tolerances) -> Result<f64> {
    let den = alpha + beta;
    // negated so that NaN is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(den > tol.denominator) {
        return Err(ModelError::DegenerateWeights(agent));
    }
    Ok(alpha / den)
}

pub fn type_shares(w: &PreferenceWeights, tol: &Tolerances) -> Result<TypeShares> {
    Ok(ByType {
        follower: share(w.alpha_f, w.beta_f, "follower", tol)?,
        positional: share(w.alpha_p, w.beta_p, "positional", tol)?,
    })
}

/// Shares evaluated directly at an enrolment level.
pub fn shares_at(e: f64, params: &ModelParams) -> Result<TypeShares> {
    type_shares(&preference_weights(e, params)?, &params.tol)
}

/// Derivatives of the four weights in `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSlopes {
    pub alpha_f: f64,
    pub beta_f: f64,
    pub alpha_p: f64,
    pub beta_p: f64,
}

fn refuse_kink(e: f64, params: &ModelParams) -> Result<()> {
    if let Some(k) = params.kink() {
        if (e - k).abs() <= params.tol.kink {
            return Err(ModelError::KinkProximity {
                e,
                kink: k,
                tol: params.tol.kink,
            });
        }
    }
    Ok(())
}

/// Closed-form `d alpha_i / dE` and `d beta_i / dE`. On the saturated
/// branch the premium is locally constant, so its slope is zero.
pub fn weight_slopes(e: f64, params: &ModelParams) -> Result<WeightSlopes> {
    let e = params.check_enrolment(e)?;
    refuse_kink(e, params)?;
    let p = params;
    let premium = wage_premium(e, p)?;
    let premium_slope = if premium.saturated { 0.0 } else { -p.kappa };
    let c = consumption_of(e, p)?;
    let c_slope = -p.price_education / p.price_consumption;

    let follower_edu = (-p.rho * e - p.rho_pi * premium.value).exp();
    let follower_cons = (-p.rho * c).exp();
    let distinction = (-p.sigma * e).exp();
    let premium_damp = (-p.sigma_pi * premium.value).exp();
    let positional_cons = (-p.sigma * c).exp();

    Ok(WeightSlopes {
        alpha_f: (p.rho + p.rho_pi * premium_slope) * follower_edu,
        // beta_F = 1 - exp(-rho C) falls as consumption falls
        beta_f: p.rho * c_slope * follower_cons,
        alpha_p: -p.sigma * distinction * one_minus_exp_neg(p.sigma_pi * premium.value)
            + p.sigma_pi * premium_slope * distinction * premium_damp,
        beta_p: -p.sigma * c_slope * positional_cons,
    })
}

fn share_slope(alpha: f64, beta: f64, d_alpha: f64, d_beta: f64) -> f64 {
    let den = alpha + beta;
    (d_alpha * beta - alpha * d_beta) / (den * den)
}

/// Quotient-rule derivative `d s_i / dE` for both types.
pub fn shares_derivative_e(e: f64, params: &ModelParams) -> Result<ByType<f64>> {
    let w = preference_weights(e, params)?;
    type_shares(&w, &params.tol)?;
    let d = weight_slopes(e, params)?;
    Ok(ByType {
        follower: share_slope(w.alpha_f, w.beta_f, d.alpha_f, d.beta_f),
        positional: share_slope(w.alpha_p, w.beta_p, d.alpha_p, d.beta_p),
    })
}

fn log_terms(params: &ModelParams) -> (f64, f64) {
    (
        (params.income / params.price_education).ln(),
        (params.income / params.price_consumption).ln(),
    )
}

fn utility_of_type(
    alpha: f64,
    beta: f64,
    agent: &'static str,
    params: &ModelParams,
) -> Result<f64> {
    let tol = &params.tol;
    share(alpha, beta, agent, tol)?;
    let (log_e, log_c) = log_terms(params);
    let log_den = (alpha + beta).ln();
    // w * log(share) -> 0 as w -> 0
    let edu = if alpha <= tol.weight {
        0.0
    } else {
        alpha * (log_e + alpha.ln() - log_den)
    };
    let cons = if beta <= tol.weight {
        0.0
    } else {
        beta * (log_c + beta.ln() - log_den)
    };
    Ok(edu + cons)
}

/// Indirect utility `alpha [log(I/p_e) + log s] + beta [log(I/p_c) + log(1 - s)]`.
pub fn indirect_utility(e: f64, params: &ModelParams) -> Result<IndirectUtility> {
    let w = preference_weights(e, params)?;
    Ok(ByType {
        follower: utility_of_type(w.alpha_f, w.beta_f, "follower", params)?,
        positional: utility_of_type(w.alpha_p, w.beta_p, "positional", params)?,
    })
}

/// Two algebraically independent evaluations of `dU_i/dE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilitySlopeForms {
    /// Envelope form: the share-derivative terms cancel.
    pub compact: f64,
    /// Log-expanded form `alpha log alpha + beta log beta - (alpha+beta) log(alpha+beta)`
    /// differentiated term by term.
    pub expanded: f64,
}

/// Relative agreement required between the two utility-slope forms.
pub const FORM_AGREEMENT: f64 = 1e-10;

pub(crate) fn utility_slope_of_type(
    alpha: f64,
    beta: f64,
    d_alpha: f64,
    d_beta: f64,
    agent: &'static str,
    params: &ModelParams,
) -> Result<UtilitySlopeForms> {
    let tol = &params.tol;
    let s = share(alpha, beta, agent, tol)?;
    if s <= tol.weight || s >= 1.0 - tol.weight {
        return Err(ModelError::ShareAtBoundary { agent, share: s });
    }
    let (log_e, log_c) = log_terms(params);
    let log_den = (alpha + beta).ln();
    let log_s = alpha.ln() - log_den;
    let log_1ms = beta.ln() - log_den;

    let compact = d_alpha * (log_e + log_s) + d_beta * (log_c + log_1ms);
    let expanded = d_alpha * (log_e + alpha.ln() + 1.0)
        + d_beta * (log_c + beta.ln() + 1.0)
        - (d_alpha + d_beta) * (log_den + 1.0);

    let scale = compact.abs().max(expanded.abs()).max(1e-9);
    if (compact - expanded).abs() > FORM_AGREEMENT * scale {
        return Err(ModelError::FormMismatch { compact, expanded });
    }
    Ok(UtilitySlopeForms { compact, expanded })
}

/// Both evaluations of `dU_i/dE` for each type.
pub fn utility_slope_forms(e: f64, params: &ModelParams) -> Result<ByType<UtilitySlopeForms>> {
    let w = preference_weights(e, params)?;
    let d = weight_slopes(e, params)?;
    Ok(ByType {
        follower: utility_slope_of_type(w.alpha_f, w.beta_f, d.alpha_f, d.beta_f, "follower", params)?,
        positional: utility_slope_of_type(
            w.alpha_p,
            w.beta_p,
            d.alpha_p,
            d.beta_p,
            "positional",
            params,
        )?,
    })
}

/// `dU_i/dE`, returned in compact form after checking it against the
/// expanded form.
pub fn utility_derivative_e(e: f64, params: &ModelParams) -> Result<ByType<f64>> {
    Ok(utility_slope_forms(e, params)?.map(|f| f.compact))
}
