// SPDX-License-Identifier: Apache-2.0

//! Stochastic primitives and their `(sigma, rho)` envelopes.
//!
//! Inter-event times and service times are iid draws from a
//! [`DistributionModel`]. The envelopes bound the MGF of sums of `k` such
//! draws by `e^{theta (sigma + rho k)}`; for iid increments `sigma = 0` and the
//! rate is `rho(theta) = ln(M(theta)) / theta`.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::math;

/// Arguments closer than this to an MGF singularity are rejected.
pub const MGF_GUARD: f64 = 1e-9;

/// A nonnegative random variable with a light tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionModel {
    Exponential {
        rate: f64,
    },
    Deterministic {
        value: f64,
    },
    /// Sum of `shape` iid exponentials with the given rate.
    Erlang {
        shape: u32,
        rate: f64,
    },
}

impl DistributionModel {
    pub fn exponential(rate: f64) -> Result<Self> {
        check_positive(rate, "exponential rate must be positive and finite")?;
        Ok(Self::Exponential { rate })
    }

    pub fn deterministic(value: f64) -> Result<Self> {
        check_positive(value, "deterministic value must be positive and finite")?;
        Ok(Self::Deterministic { value })
    }

    pub fn erlang(shape: u32, rate: f64) -> Result<Self> {
        if shape == 0 {
            return Err(Error::InvalidArgument("erlang shape must be at least 1"));
        }
        check_positive(rate, "erlang rate must be positive and finite")?;
        Ok(Self::Erlang { shape, rate })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::Deterministic { value } => value,
            Self::Erlang { shape, rate } => f64::from(shape) / rate,
        }
    }

    /// Reciprocal of the mean.
    pub fn mean_rate(&self) -> f64 {
        1.0 / self.mean()
    }

    /// Smallest `theta` at which the MGF diverges, if any.
    pub fn singularity(&self) -> Option<f64> {
        match *self {
            Self::Exponential { rate } | Self::Erlang { rate, .. } => Some(rate),
            Self::Deterministic { .. } => None,
        }
    }

    pub fn is_memoryless(&self) -> bool {
        matches!(self, Self::Exponential { .. })
    }

    /// `ln E[e^{theta X}]`. Deterministic models never overflow here, which is
    /// why callers should prefer this over [`mgf_eval`].
    pub fn ln_mgf(&self, theta: f64) -> Result<f64> {
        if theta.is_nan() {
            return Err(Error::InvalidArgument("theta is NaN"));
        }
        match *self {
            Self::Exponential { rate } => {
                check_domain(theta, rate)?;
                Ok(-libm::log1p(-theta / rate))
            }
            Self::Deterministic { value } => Ok(theta * value),
            Self::Erlang { shape, rate } => {
                check_domain(theta, rate)?;
                Ok(-f64::from(shape) * libm::log1p(-theta / rate))
            }
        }
    }

    /// One iid draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Exponential { rate } => exp_dist(rate).sample(rng),
            Self::Deterministic { value } => value,
            Self::Erlang { shape, rate } => {
                let d = exp_dist(rate);
                (0..shape).map(|_| d.sample(rng)).sum()
            }
        }
    }

    /// Builds a sampler that avoids re-validating the rate on every draw.
    pub fn sampler(&self) -> Sampler {
        match *self {
            Self::Exponential { rate } => Sampler::Exp(exp_dist(rate)),
            Self::Deterministic { value } => Sampler::Constant(value),
            Self::Erlang { shape, rate } => Sampler::Erlang(shape, exp_dist(rate)),
        }
    }
}

/// Pre-built draw routine for a [`DistributionModel`].
#[derive(Debug, Clone, Copy)]
pub enum Sampler {
    Exp(Exp<f64>),
    Constant(f64),
    Erlang(u32, Exp<f64>),
}

impl Sampler {
    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Sampler::Exp(d) => d.sample(rng),
            Sampler::Constant(v) => v,
            Sampler::Erlang(k, d) => (0..k).map(|_| d.sample(rng)).sum(),
        }
    }
}

fn exp_dist(rate: f64) -> Exp<f64> {
    // rate is validated by the constructors
    Exp::new(rate).expect("positive finite rate")
}

fn check_positive(x: f64, msg: &'static str) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg))
    }
}

fn check_domain(theta: f64, rate: f64) -> Result<()> {
    if theta >= rate - MGF_GUARD {
        Err(Error::Domain { theta, limit: rate - MGF_GUARD })
    } else {
        Ok(())
    }
}

/// Moment generating function `E[e^{theta X}]`.
pub fn mgf_eval(model: &DistributionModel, theta: f64) -> Result<f64> {
    model.ln_mgf(theta).map(math::exp)
}

/// The sampling rule of the sensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TriggerPolicy {
    /// Update `n` is sent at time `n * w`.
    TimeTriggered { w: f64 },
    /// Update `n` is sent with sensor event `n * alpha`.
    ///
    /// `alpha` is an integer for anything that is simulated. Bound curves
    /// over a utilization axis relax it to a real number, see
    /// [`TriggerPolicy::event_triggered_relaxed`].
    EventTriggered { alpha: f64 },
}

impl TriggerPolicy {
    pub fn time_triggered(w: f64) -> Result<Self> {
        check_positive(w, "update interval w must be positive and finite")?;
        Ok(Self::TimeTriggered { w })
    }

    pub fn event_triggered(alpha: u32) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidArgument("event threshold alpha must be at least 1"));
        }
        Ok(Self::EventTriggered { alpha: f64::from(alpha) })
    }

    /// Event-triggered policy with a real-valued threshold, only meaningful
    /// for bound evaluation.
    pub fn event_triggered_relaxed(alpha: f64) -> Result<Self> {
        check_positive(alpha, "event threshold alpha must be positive and finite")?;
        Ok(Self::EventTriggered { alpha })
    }

    /// The integer threshold, if this is an event-triggered policy with an
    /// integral `alpha`.
    pub fn integer_alpha(&self) -> Option<u64> {
        match *self {
            Self::EventTriggered { alpha } if alpha >= 1.0 && libm::trunc(alpha) == alpha => {
                Some(alpha as u64)
            }
            _ => None,
        }
    }

    /// Mean time between updates.
    pub fn mean_interval(&self, event_model: &DistributionModel) -> f64 {
        match *self {
            Self::TimeTriggered { w } => w,
            Self::EventTriggered { alpha } => alpha * event_model.mean(),
        }
    }
}

/// Envelope quantities at a single `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSet {
    pub theta: f64,
    pub sigma_s: f64,
    pub rho_s: f64,
    pub rho_a_lower: f64,
    /// `+inf` when the upper arrival envelope diverges at `theta`.
    pub rho_a_upper: f64,
    pub stable: bool,
}

impl EnvelopeSet {
    /// Evaluates all envelopes of a policy/event/service triple.
    ///
    /// Fails only if the service MGF diverges; a diverging upper arrival
    /// envelope is stored as `+inf` because delay and DoI of event-triggered
    /// systems do not need it.
    pub fn evaluate(
        policy: &TriggerPolicy,
        event_model: &DistributionModel,
        service: &DistributionModel,
        theta: f64,
    ) -> Result<Self> {
        let (sigma_s, rho_s) = service_envelope(service, theta)?;
        let rho_a_lower = arrival_lower_envelope(policy, event_model, theta)?;
        let rho_a_upper = match arrival_upper_envelope(policy, event_model, theta) {
            Ok(v) => v,
            Err(Error::Domain { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        Ok(Self::from_parts(theta, sigma_s, rho_s, rho_a_lower, rho_a_upper))
    }

    pub fn from_parts(theta: f64, sigma_s: f64, rho_s: f64, rho_a_lower: f64, rho_a_upper: f64) -> Self {
        Self { theta, sigma_s, rho_s, rho_a_lower, rho_a_upper, stable: rho_a_lower > rho_s }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("theta must be positive and finite"))
    }
}

/// `(sigma_S, rho_S)` of a service process with iid service times.
pub fn service_envelope(service: &DistributionModel, theta: f64) -> Result<(f64, f64)> {
    check_theta(theta)?;
    let rho = match *service {
        DistributionModel::Deterministic { value } => value,
        _ => service.ln_mgf(theta)? / theta,
    };
    Ok((0.0, rho))
}

/// Lower arrival envelope rate `rho_A(-theta)`; always finite.
pub fn arrival_lower_envelope(
    policy: &TriggerPolicy,
    event_model: &DistributionModel,
    theta: f64,
) -> Result<f64> {
    check_theta(theta)?;
    Ok(match *policy {
        TriggerPolicy::TimeTriggered { w } => w,
        TriggerPolicy::EventTriggered { alpha } => match *event_model {
            DistributionModel::Deterministic { value } => alpha * value,
            _ => -alpha / theta * event_model.ln_mgf(-theta)?,
        },
    })
}

/// Upper arrival envelope rate `rho_A(theta)`.
pub fn arrival_upper_envelope(
    policy: &TriggerPolicy,
    event_model: &DistributionModel,
    theta: f64,
) -> Result<f64> {
    check_theta(theta)?;
    Ok(match *policy {
        TriggerPolicy::TimeTriggered { w } => w,
        TriggerPolicy::EventTriggered { alpha } => match *event_model {
            DistributionModel::Deterministic { value } => alpha * value,
            _ => alpha / theta * event_model.ln_mgf(theta)?,
        },
    })
}

/// `(rho_A_lower, rho_A_upper)`. For time-triggered policies the event model
/// is ignored.
pub fn arrival_envelopes(
    policy: &TriggerPolicy,
    event_model: &DistributionModel,
    theta: f64,
) -> Result<(f64, f64)> {
    Ok((
        arrival_lower_envelope(policy, event_model, theta)?,
        arrival_upper_envelope(policy, event_model, theta)?,
    ))
}

/// `ln M_J(-theta)` of the residual inter-event time. Exact for memoryless
/// events, otherwise the conservative estimate `ln 1 = 0`.
pub fn ln_residual_mgf(event_model: &DistributionModel, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if event_model.is_memoryless() {
        event_model.ln_mgf(-theta)
    } else {
        Ok(0.0)
    }
}

/// MGF of the residual inter-event time at `-theta`, in `(0, 1]`.
pub fn residual_mgf(event_model: &DistributionModel, theta: f64) -> Result<f64> {
    ln_residual_mgf(event_model, theta).map(math::exp)
}
