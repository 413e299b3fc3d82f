// SPDX-License-Identifier: Apache-2.0

//! Statistical tail bounds for delay, peak age-of-information (AoI) and peak
//! deviation-of-information (DoI) of sensors sampled either periodically
//! (time-triggered) or every `alpha` sensor events (event-triggered), with the
//! network modelled as a max-plus server.
//!
//! The crate has three layers:
//!
//! * [`envelope`]: distribution models, their moment generating functions and
//!   the `(sigma, rho)` envelope rates of arrival and service processes.
//! * [`bound`]: MGF bounds of delay and AoI, their Chernoff inversion, DoI
//!   tail bounds and the numerical optimization of the free parameter `theta`.
//! * [`sim`]: a streaming discrete-event simulator of sensor, sampler, FIFO
//!   queue and monitor that produces empirical samples of the same metrics.
//!
//! ## no_std support
//!
//! The crate is `no_std` and only needs `alloc`. Transcendental functions come
//! from `libm`, random numbers from `rand_chacha`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bound;
pub mod envelope;
mod error;
pub(crate) mod math;
pub mod optimize;
pub mod sim;

pub use bound::{
    aoi_mgf_bound, delay_mgf_bound, doi_epsilon_bound, doi_tail_probability, exact_mm1_tail,
    invert_to_quantile, optimize_theta, stability_check, BoundResult, DoiBound, Metric, Scenario,
};
pub use envelope::{
    arrival_envelopes, mgf_eval, residual_mgf, service_envelope, DistributionModel, EnvelopeSet,
    TriggerPolicy,
};
pub use error::{Error, Result};
