// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the bound engine and the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    /// The MGF diverges at `theta`; the search domain must stay below `limit`.
    #[error("MGF diverges at theta = {theta} (must be below {limit})")]
    Domain { theta: f64, limit: f64 },

    /// The stability condition `rho_a_lower > rho_s` does not hold.
    #[error("unstable at this theta: rho_a_lower = {rho_a_lower} <= rho_s = {rho_s}")]
    Instability { rho_a_lower: f64, rho_s: f64 },

    /// No theta in the search domain satisfies the stability condition.
    #[error("no feasible theta: the scenario cannot be certified at any theta")]
    NoFeasibleTheta,

    /// The DoI bound is infinite because inter-event times never shrink it.
    #[error("DoI bound is infinite (M_I(-theta) = 1)")]
    InfiniteDoi,

    /// A finite event stream ended before the requested time was covered.
    #[error("event stream exhausted before time {time}")]
    EventStreamExhausted { time: f64 },

    /// An argument violates the operation's preconditions.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
