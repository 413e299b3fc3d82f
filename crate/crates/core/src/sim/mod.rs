// SPDX-License-Identifier: Apache-2.0

//! Discrete-event simulation of sensor, sampler, FIFO queue and monitor.
//!
//! The simulator follows the recursion of a work-conserving single-server
//! FIFO queue, `D(n) = max(A(n), D(n-1)) + L(n)`, and reads off the
//! per-update delay `T(n) = D(n) - A(n)`, peak AoI `D(n+1) - A(n)` and peak
//! DoI `C(D(n+1)) - C(A(n))`, where `C(t)` counts sensor events in `(0, t]`.
//!
//! Two entry points exist: [`trace`] materializes short traces for
//! inspection and brute-force checks, [`run`] streams long runs in constant
//! memory and feeds the samples into a [`run::SampleSink`].

pub mod events;
pub mod rng;
pub mod run;
pub mod tail;
pub mod trace;

pub use events::{Cursor, EventStream};
pub use rng::{stream_rng, StreamId};
pub use run::{
    run_replications, simulate_replication, MetricTails, SampleSink, SimConfig, TailStorage, DEFAULT_BURN_IN,
};
pub use tail::{empirical_quantile, EmpiricalTail, HistogramLayout, Quantile};
pub use trace::{fifo_service, generate_arrivals, peak_metrics, PeakSamples, UpdateTrace};
