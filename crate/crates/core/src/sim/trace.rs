// SPDX-License-Identifier: Apache-2.0

//! Materialized update traces. Intended for short runs; long runs go through
//! [`crate::sim::run`], which produces identical samples without storing the
//! trace.

use alloc::vec::Vec;

use crate::envelope::TriggerPolicy;
use crate::error::{Error, Result};
use crate::sim::events::{Cursor, EventStream};

/// Per-update time stamps and sensor counts; index `i` holds update `i + 1`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UpdateTrace {
    pub arrivals: Vec<f64>,
    /// `C(A(n))`.
    pub sampled_counts: Vec<u64>,
    pub departures: Vec<f64>,
    /// `C(D(n))`, filled by [`peak_metrics`].
    pub departure_counts: Vec<u64>,
}

impl UpdateTrace {
    pub fn len(&self) -> usize {
        self.arrivals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrivals.is_empty()
    }
}

/// Per-update metric samples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PeakSamples {
    /// `T(n)` for every update.
    pub delay: Vec<f64>,
    /// `Delta(n)`, one fewer than `delay`.
    pub aoi: Vec<f64>,
    /// `Phi(n)`, one fewer than `delay`.
    pub doi: Vec<u64>,
}

/// Generates arrival times and sampled counts of the first `n_updates`
/// updates. Requires an integer threshold for event-triggered policies.
pub fn generate_arrivals<S: Iterator<Item = f64>>(
    policy: &TriggerPolicy,
    events: &mut EventStream<S>,
    n_updates: usize,
) -> Result<UpdateTrace> {
    if n_updates == 0 {
        return Err(Error::InvalidArgument("n_updates must be at least 1"));
    }
    let mut trace = UpdateTrace {
        arrivals: Vec::with_capacity(n_updates),
        sampled_counts: Vec::with_capacity(n_updates),
        ..UpdateTrace::default()
    };
    match *policy {
        TriggerPolicy::TimeTriggered { w } => {
            let mut cursor = Cursor::default();
            for n in 1..=n_updates {
                let a = n as f64 * w;
                trace.arrivals.push(a);
                trace.sampled_counts.push(events.count_at(&mut cursor, a)?);
            }
        }
        TriggerPolicy::EventTriggered { .. } => {
            let alpha =
                policy.integer_alpha().ok_or(Error::InvalidArgument("simulation needs an integer alpha"))?;
            for n in 1..=n_updates as u64 {
                trace.arrivals.push(events.time_of(n * alpha)?);
                trace.sampled_counts.push(n * alpha);
            }
        }
    }
    Ok(trace)
}

/// Fills departures with the FIFO recursion `D(n) = max(A(n), D(n-1)) + L(n)`,
/// taking service times from `services` in order.
pub fn fifo_service<I: IntoIterator<Item = f64>>(trace: &mut UpdateTrace, services: I) -> Result<()> {
    let mut services = services.into_iter();
    let mut last = 0.0f64;
    trace.departures.clear();
    for &a in &trace.arrivals {
        let l = services.next().ok_or(Error::InvalidArgument("fewer service times than updates"))?;
        last = a.max(last) + l;
        trace.departures.push(last);
    }
    Ok(())
}

/// Computes delay, peak AoI and peak DoI for a trace with departures.
/// `events` must be the stream the trace was sampled from, not yet released.
pub fn peak_metrics<S: Iterator<Item = f64>>(
    trace: &mut UpdateTrace,
    events: &mut EventStream<S>,
) -> Result<PeakSamples> {
    let n = trace.len();
    if n < 2 || trace.departures.len() != n || trace.sampled_counts.len() != n {
        return Err(Error::InvalidArgument("trace needs at least two complete updates"));
    }
    let mut cursor = Cursor::default();
    trace.departure_counts.clear();
    for &d in &trace.departures {
        trace.departure_counts.push(events.count_at(&mut cursor, d)?);
    }
    let delay = trace.departures.iter().zip(&trace.arrivals).map(|(d, a)| d - a).collect();
    let aoi = (0..n - 1).map(|i| trace.departures[i + 1] - trace.arrivals[i]).collect();
    let doi = (0..n - 1).map(|i| trace.departure_counts[i + 1] - trace.sampled_counts[i]).collect();
    Ok(PeakSamples { delay, aoi, doi })
}
