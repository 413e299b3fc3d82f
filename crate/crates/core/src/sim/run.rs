// SPDX-License-Identifier: Apache-2.0

//! Streaming simulation of long runs and pooling of replications.

use crate::envelope::{DistributionModel, TriggerPolicy};
use crate::error::{Error, Result};
use crate::sim::events::{Cursor, EventStream};
use crate::sim::rng::{stream_rng, StreamId, PILOT_REPLICATION};
use crate::sim::tail::{EmpiricalTail, HistogramLayout, EXACT_LIMIT};

/// Updates discarded at the start of every replication by default.
pub const DEFAULT_BURN_IN: u64 = 10_000;
/// Length of the pilot run that sizes histograms.
pub const PILOT_UPDATES: u64 = 100_000;

/// One simulated system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub event_model: DistributionModel,
    pub service_model: DistributionModel,
    /// Event-triggered policies need an integer threshold.
    pub policy: TriggerPolicy,
    pub burn_in: u64,
    /// Samples recorded per replication after burn-in.
    pub n_updates: u64,
}

/// Receives `(T(n), Delta(n), Phi(n))` for every recorded update `n`.
pub trait SampleSink {
    fn record(&mut self, delay: f64, aoi: f64, doi: u64);
}

impl<F: FnMut(f64, f64, u64)> SampleSink for F {
    fn record(&mut self, delay: f64, aoi: f64, doi: u64) {
        self(delay, aoi, doi)
    }
}

enum Arrivals {
    Periodic(f64),
    EveryKthEvent(u64),
}

/// Simulates replication `replication` of `cfg` and feeds the samples of
/// updates `burn_in + 1 ..= burn_in + n_updates` into `sink`.
///
/// Produces exactly the samples of the materialized path in
/// [`crate::sim::trace`] driven by the same streams.
pub fn simulate_replication<K: SampleSink + ?Sized>(
    cfg: &SimConfig,
    base_seed: u64,
    replication: u64,
    sink: &mut K,
) -> Result<()> {
    let arrivals = match cfg.policy {
        TriggerPolicy::TimeTriggered { w } => Arrivals::Periodic(w),
        TriggerPolicy::EventTriggered { .. } => Arrivals::EveryKthEvent(
            cfg.policy.integer_alpha().ok_or(Error::InvalidArgument("simulation needs an integer alpha"))?,
        ),
    };
    let mut events =
        EventStream::sampled(&cfg.event_model, stream_rng(base_seed, replication, StreamId::Events));
    let mut service_rng = stream_rng(base_seed, replication, StreamId::Service);
    let service = cfg.service_model.sampler();

    let mut at_arrival = Cursor::default();
    let mut at_departure = Cursor::default();
    let total = cfg.burn_in + cfg.n_updates;
    // (A(n), C(A(n)), D(n)) of the previous update
    let mut prev: Option<(f64, u64, f64)> = None;
    let mut last_departure = 0.0f64;

    for n in 1..=total + 1 {
        let (a, count_a) = match arrivals {
            Arrivals::Periodic(w) => {
                let a = n as f64 * w;
                (a, events.count_at(&mut at_arrival, a)?)
            }
            Arrivals::EveryKthEvent(alpha) => {
                let k = n * alpha;
                at_arrival.count = k;
                (events.time_of(k)?, k)
            }
        };
        let d = a.max(last_departure) + service.draw(&mut service_rng);
        let count_d = events.count_at(&mut at_departure, d)?;
        if let Some((pa, pcount, pd)) = prev {
            if n - 1 > cfg.burn_in {
                sink.record(pd - pa, d - pa, count_d - pcount);
            }
        }
        prev = Some((a, count_a, d));
        last_departure = d;
        events.release_through(at_arrival.count.min(at_departure.count));
    }
    Ok(())
}

/// Pooled samples of all three metrics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricTails {
    pub delay: EmpiricalTail,
    pub aoi: EmpiricalTail,
    pub doi: EmpiricalTail,
}

impl SampleSink for MetricTails {
    #[inline]
    fn record(&mut self, delay: f64, aoi: f64, doi: u64) {
        self.delay.push(delay);
        self.aoi.push(aoi);
        self.doi.push(doi as f64);
    }
}

impl MetricTails {
    pub fn new(storage: &TailStorage) -> Self {
        match storage {
            TailStorage::Exact => Self::default(),
            TailStorage::Binned { delay, aoi, doi } => Self {
                delay: EmpiricalTail::binned(*delay),
                aoi: EmpiricalTail::binned(*aoi),
                doi: EmpiricalTail::binned(*doi),
            },
        }
    }

    pub fn merge(&mut self, other: MetricTails) -> Result<()> {
        self.delay.merge(other.delay)?;
        self.aoi.merge(other.aoi)?;
        self.doi.merge(other.doi)
    }
}

/// How pooled samples are stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailStorage {
    Exact,
    Binned { delay: HistogramLayout, aoi: HistogramLayout, doi: HistogramLayout },
}

impl TailStorage {
    /// Exact storage up to [`EXACT_LIMIT`] samples, otherwise histograms
    /// sized by a pilot run.
    pub fn for_budget(cfg: &SimConfig, total_samples: u64, base_seed: u64) -> Result<Self> {
        if total_samples <= EXACT_LIMIT {
            Ok(Self::Exact)
        } else {
            Self::from_pilot(cfg, base_seed)
        }
    }

    /// Histograms covering twice the largest value of a short pilot run on a
    /// reserved replication stream.
    pub fn from_pilot(cfg: &SimConfig, base_seed: u64) -> Result<Self> {
        let pilot = SimConfig { n_updates: PILOT_UPDATES, ..*cfg };
        let (mut dmax, mut amax, mut pmax) = (0.0f64, 0.0f64, 0u64);
        simulate_replication(&pilot, base_seed, PILOT_REPLICATION, &mut |d: f64, a: f64, p: u64| {
            dmax = dmax.max(d);
            amax = amax.max(a);
            pmax = pmax.max(p);
        })?;
        Ok(Self::Binned {
            delay: HistogramLayout::for_range(dmax),
            aoi: HistogramLayout::for_range(amax),
            doi: HistogramLayout::for_counts(pmax),
        })
    }
}

/// Runs replications `0..n_reps` sequentially and pools them.
pub fn run_replications(
    cfg: &SimConfig,
    n_reps: u64,
    base_seed: u64,
    storage: &TailStorage,
) -> Result<MetricTails> {
    let mut pooled = MetricTails::new(storage);
    for r in 0..n_reps {
        let mut tails = MetricTails::new(storage);
        simulate_replication(cfg, base_seed, r, &mut tails)?;
        pooled.merge(tails)?;
    }
    Ok(pooled)
}
