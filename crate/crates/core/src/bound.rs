// SPDX-License-Identifier: Apache-2.0

//! Delay, peak-AoI and peak-DoI tail bounds.
//!
//! For iid arrival increments at a max-plus server, the delay MGF is bounded
//! by a geometric series over the backlog start `nu`:
//!
//! ```text
//! M_T(theta) <= e^{theta (sigma_S + rho_S)} / (1 - e^{-theta (rho_A_lower - rho_S)})
//! ```
//!
//! and the peak-AoI MGF picks up one more service time plus one upper-envelope
//! inter-arrival term. Chernoff's inequality turns an MGF bound `M` at `theta`
//! into the quantile bound `(ln M - ln eps) / theta`, which is then minimized
//! over `theta`. The DoI bounds multiply the AoI (time-triggered) or delay
//! (event-triggered) MGF bound by powers of `M_I(-theta)`.
//!
//! All bounds are evaluated in the log domain.

use crate::envelope::{ln_residual_mgf, DistributionModel, EnvelopeSet, TriggerPolicy, MGF_GUARD};
use crate::error::{Error, Result};
use crate::math;
use crate::optimize;

/// Upper end of the theta search when no MGF has a singularity.
pub const THETA_CAP: f64 = 1e3;
/// The search starts this many decades below its upper end.
pub const THETA_DECADES: f64 = 6.0;

/// The performance metric a bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Delay,
    PeakAoi,
    PeakDoi,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Delay, Metric::PeakAoi, Metric::PeakDoi];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Delay => "delay",
            Metric::PeakAoi => "aoi",
            Metric::PeakDoi => "doi",
        }
    }
}

/// A sensor/network system together with the target violation probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub event_model: DistributionModel,
    pub service_model: DistributionModel,
    pub policy: TriggerPolicy,
    /// Violation probability. Values `>= 1` are accepted and give vacuous
    /// bounds.
    pub epsilon: f64,
}

impl Scenario {
    pub fn new(
        event_model: DistributionModel,
        service_model: DistributionModel,
        policy: TriggerPolicy,
        epsilon: f64,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidArgument("epsilon must be positive"));
        }
        Ok(Self { event_model, service_model, policy, epsilon })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Mean utilization: mean service time over mean inter-update time.
    pub fn utilization(&self) -> f64 {
        self.service_model.mean() / self.policy.mean_interval(&self.event_model)
    }

    pub fn envelopes(&self, theta: f64) -> Result<EnvelopeSet> {
        EnvelopeSet::evaluate(&self.policy, &self.event_model, &self.service_model, theta)
    }

    fn ln_event_mgf_neg(&self, theta: f64) -> Result<f64> {
        let v = self.event_model.ln_mgf(-theta)?;
        if v < 0.0 {
            Ok(v)
        } else {
            Err(Error::InfiniteDoi)
        }
    }
}

/// An optimized bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub metric: Metric,
    pub theta_star: f64,
    /// Time units for delay and AoI, event counts for DoI.
    pub value: f64,
    /// Integer DoI bound, set for [`Metric::PeakDoi`] only.
    pub value_int: Option<u64>,
    pub epsilon: f64,
}

impl BoundResult {
    /// True when `epsilon >= 1`: the bound holds but says nothing.
    pub fn vacuous(&self) -> bool {
        self.epsilon >= 1.0
    }
}

/// Real-valued and integer DoI bounds at a fixed theta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoiBound {
    pub phi_real: f64,
    pub phi_int: u64,
}

/// `rho_A_lower > rho_S`, strictly.
pub fn stability_check(env: &EnvelopeSet) -> bool {
    env.rho_a_lower > env.rho_s
}

fn ln_geometric(env: &EnvelopeSet) -> Result<f64> {
    if !stability_check(env) {
        return Err(Error::Instability { rho_a_lower: env.rho_a_lower, rho_s: env.rho_s });
    }
    Ok(-math::ln_one_minus_exp_neg(env.theta * (env.rho_a_lower - env.rho_s)))
}

/// Logarithm of the delay MGF bound.
pub fn ln_delay_mgf_bound(env: &EnvelopeSet) -> Result<f64> {
    Ok(env.theta * (env.sigma_s + env.rho_s) + ln_geometric(env)?)
}

/// Delay MGF bound `M_T(theta)`.
pub fn delay_mgf_bound(env: &EnvelopeSet) -> Result<f64> {
    ln_delay_mgf_bound(env).map(math::exp)
}

/// Logarithm of the peak-AoI MGF bound; uses `env.rho_a_upper`.
pub fn ln_aoi_mgf_bound(env: &EnvelopeSet) -> Result<f64> {
    let geo = ln_geometric(env)?;
    if !env.rho_a_upper.is_finite() {
        return Err(Error::Domain { theta: env.theta, limit: f64::NAN });
    }
    let queued = env.theta * (env.sigma_s + 2.0 * env.rho_s) + geo;
    let idle = env.theta * (env.sigma_s + env.rho_s + env.rho_a_upper);
    Ok(math::ln_add_exp(queued, idle))
}

/// Peak-AoI MGF bound `M_Delta(theta)`.
pub fn aoi_mgf_bound(env: &EnvelopeSet) -> Result<f64> {
    ln_aoi_mgf_bound(env).map(math::exp)
}

/// Chernoff inversion `(ln M - ln eps) / theta`.
pub fn invert_to_quantile(mgf_bound_value: f64, theta: f64, epsilon: f64) -> Result<f64> {
    if !(mgf_bound_value > 0.0) {
        return Err(Error::InvalidArgument("MGF bound must be positive"));
    }
    invert_ln_to_quantile(math::ln(mgf_bound_value), theta, epsilon)
}

/// [`invert_to_quantile`] for a bound given as its logarithm.
pub fn invert_ln_to_quantile(ln_mgf: f64, theta: f64, epsilon: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::InvalidArgument("theta must be positive"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument("epsilon must be positive"));
    }
    Ok((ln_mgf - math::ln(epsilon)) / theta)
}

/// `T_eps(theta)`.
pub fn delay_bound_at(scenario: &Scenario, theta: f64) -> Result<f64> {
    let env = scenario.envelopes(theta)?;
    invert_ln_to_quantile(ln_delay_mgf_bound(&env)?, theta, scenario.epsilon)
}

/// `Delta_eps(theta)`.
pub fn aoi_bound_at(scenario: &Scenario, theta: f64) -> Result<f64> {
    let env = scenario.envelopes(theta)?;
    invert_ln_to_quantile(ln_aoi_mgf_bound(&env)?, theta, scenario.epsilon)
}

fn ln_doi_tail(scenario: &Scenario, theta: f64, phi: f64) -> Result<f64> {
    let env = scenario.envelopes(theta)?;
    let ln_mi = scenario.event_model.ln_mgf(-theta)?;
    match scenario.policy {
        TriggerPolicy::TimeTriggered { .. } => {
            let ln_j = ln_residual_mgf(&scenario.event_model, theta)?;
            Ok(ln_aoi_mgf_bound(&env)? + ln_j + phi * ln_mi)
        }
        TriggerPolicy::EventTriggered { alpha } => {
            if phi < alpha - 1.0 {
                return Err(Error::InvalidArgument("event-triggered DoI needs phi >= alpha - 1"));
            }
            Ok(ln_delay_mgf_bound(&env)? + (phi - alpha + 1.0) * ln_mi)
        }
    }
}

/// Upper bound on `P[Phi(n) > phi]` at `theta`. May exceed 1.
pub fn doi_tail_probability(scenario: &Scenario, theta: f64, phi: u64) -> Result<f64> {
    ln_doi_tail(scenario, theta, phi as f64).map(math::exp)
}

// Absorbs last-bit noise so an exact integer never ceils to the next one.
fn ceil_tolerant(x: f64) -> f64 {
    libm::ceil(x - 1e-9 * x.abs().max(1.0))
}

/// Smallest DoI threshold whose tail bound at `theta` is at most epsilon.
pub fn doi_epsilon_bound(scenario: &Scenario, theta: f64) -> Result<DoiBound> {
    let env = scenario.envelopes(theta)?;
    let ln_mi = scenario.ln_event_mgf_neg(theta)?;
    let ln_eps = math::ln(scenario.epsilon);
    match scenario.policy {
        TriggerPolicy::TimeTriggered { .. } => {
            let ln_j = ln_residual_mgf(&scenario.event_model, theta)?;
            let phi_real = (ln_eps - ln_aoi_mgf_bound(&env)? - ln_j) / ln_mi;
            let phi_int = ceil_tolerant(phi_real).max(0.0) as u64;
            Ok(DoiBound { phi_real, phi_int })
        }
        TriggerPolicy::EventTriggered { alpha } => {
            let ratio = (ln_eps - ln_delay_mgf_bound(&env)?) / ln_mi;
            let phi_real = ratio + alpha - 1.0;
            let phi_int = ceil_tolerant(ratio.max(0.0) + alpha - 1.0) as u64;
            Ok(DoiBound { phi_real, phi_int })
        }
    }
}

/// Bound of `metric` at a fixed theta (real-valued DoI for `PeakDoi`).
pub fn bound_at(scenario: &Scenario, metric: Metric, theta: f64) -> Result<f64> {
    match metric {
        Metric::Delay => delay_bound_at(scenario, theta),
        Metric::PeakAoi => aoi_bound_at(scenario, theta),
        Metric::PeakDoi => doi_epsilon_bound(scenario, theta).map(|d| d.phi_real),
    }
}

/// The interval `(lo, hi)` searched by [`optimize_theta`].
pub fn theta_search_interval(scenario: &Scenario, metric: Metric) -> (f64, f64) {
    let mut hi = THETA_CAP;
    let mut clip = |s: Option<f64>| {
        if let Some(s) = s {
            hi = hi.min(s - 2.0 * MGF_GUARD);
        }
    };
    clip(scenario.service_model.singularity());
    let needs_upper_arrival = match scenario.policy {
        TriggerPolicy::EventTriggered { .. } => metric == Metric::PeakAoi,
        TriggerPolicy::TimeTriggered { .. } => false,
    };
    if needs_upper_arrival {
        clip(scenario.event_model.singularity());
    }
    (hi * libm::pow(10.0, -THETA_DECADES), hi)
}

/// Minimizes the bound of `metric` over theta.
pub fn optimize_theta(scenario: &Scenario, metric: Metric) -> Result<BoundResult> {
    if !(scenario.utilization() < 1.0) {
        return Err(Error::NoFeasibleTheta);
    }
    let (lo, hi) = theta_search_interval(scenario, metric);
    if !(hi > lo && lo > 0.0) {
        return Err(Error::NoFeasibleTheta);
    }
    let objective = |theta: f64| bound_at(scenario, metric, theta).unwrap_or(f64::INFINITY);
    let best = optimize::minimize(objective, lo, hi, optimize::GRID_POINTS, optimize::REL_TOL)
        .ok_or(Error::NoFeasibleTheta)?;
    let value_int = match metric {
        Metric::PeakDoi => Some(doi_epsilon_bound(scenario, best.x)?.phi_int),
        _ => None,
    };
    Ok(BoundResult { metric, theta_star: best.x, value: best.value, value_int, epsilon: scenario.epsilon })
}

/// Exact sojourn-time quantile of the M|M|1 queue, `-ln(eps) / (mu - lambda)`.
pub fn exact_mm1_tail(lambda: f64, mu: f64, epsilon: f64) -> Result<f64> {
    if !(lambda > 0.0 && mu > 0.0) {
        return Err(Error::InvalidArgument("rates must be positive"));
    }
    if lambda >= mu {
        return Err(Error::InvalidArgument("M|M|1 needs lambda < mu"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument("epsilon must lie in (0, 1]"));
    }
    Ok(-math::ln(epsilon) / (mu - lambda))
}
