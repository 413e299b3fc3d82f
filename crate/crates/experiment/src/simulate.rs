// SPDX-License-Identifier: Apache-2.0

//! Replications on the rayon pool and conversion of pooled tails to rows.

use aoidoi_core::sim::{simulate_replication, MetricTails, SimConfig, TailStorage};
use aoidoi_core::{DistributionModel, TriggerPolicy};
use rayon::prelude::*;

use crate::rows::{flags, CsvRow, Source};
use crate::Result;

/// Updates per replication. The replication layout depends on the budget
/// only, never on the number of workers.
pub const REPLICATION_SIZE: u64 = 1_000_000;

/// Splits `samples` into replication sizes.
pub fn replication_plan(samples: u64) -> Vec<u64> {
    let reps = samples.div_ceil(REPLICATION_SIZE);
    (0..reps).map(|r| (samples - r * REPLICATION_SIZE).min(REPLICATION_SIZE)).collect()
}

/// Nearest integer threshold, at least 1.
pub fn round_alpha(alpha: f64) -> u32 {
    alpha.round().max(1.0) as u32
}

/// A system to simulate, with the rounding applied to its threshold.
#[derive(Debug, Clone, Copy)]
pub struct Simulated {
    pub config: SimConfig,
    /// Set when a real threshold was rounded to this integer.
    pub alpha_rounded: Option<u32>,
}

impl Simulated {
    pub fn new(
        event_model: DistributionModel,
        service_model: DistributionModel,
        policy: TriggerPolicy,
        burn_in: u64,
    ) -> Result<Self> {
        let (policy, alpha_rounded) = match policy {
            TriggerPolicy::EventTriggered { alpha } => {
                let k = round_alpha(alpha);
                let rounded = (k as f64 != alpha).then_some(k);
                (TriggerPolicy::event_triggered(k)?, rounded)
            }
            p => (p, None),
        };
        Ok(Self {
            config: SimConfig { event_model, service_model, policy, burn_in, n_updates: 0 },
            alpha_rounded,
        })
    }
}

/// Runs the replications of `sim` in parallel and pools them.
pub fn pooled_tails(sim: &SimConfig, samples: u64, seed: u64) -> Result<MetricTails> {
    let storage = TailStorage::for_budget(sim, samples, seed)?;
    let plan = replication_plan(samples);
    let pooled = plan
        .par_iter()
        .enumerate()
        .map(|(r, &n)| {
            let cfg = SimConfig { n_updates: n, ..*sim };
            let mut tails = MetricTails::new(&storage);
            simulate_replication(&cfg, seed, r as u64, &mut tails)?;
            Ok::<_, aoidoi_core::Error>(tails)
        })
        .try_reduce(
            || MetricTails::new(&storage),
            |mut a, b| {
                a.merge(b)?;
                Ok(a)
            },
        )?;
    Ok(pooled)
}

/// Identifies the rows produced for one simulated system.
#[derive(Debug, Clone)]
pub struct RowKey {
    pub scenario: String,
    pub policy: String,
    pub axis: String,
    pub axis_value: f64,
    pub utilization: f64,
}

/// Rows of one simulated system and the smallest sample of each metric.
#[derive(Debug, Clone, Default)]
pub struct SimulationOutcome {
    pub rows: Vec<CsvRow>,
    /// Minimum of delay, AoI and DoI samples.
    pub minima: [f64; 3],
}

/// Empirical quantile rows for every metric and epsilon.
pub fn simulation_rows(
    key: &RowKey,
    sim: &Simulated,
    samples: u64,
    seed: u64,
    epsilons: &[f64],
) -> Result<SimulationOutcome> {
    let mut tails = pooled_tails(&sim.config, samples, seed)?;
    let minima = [&tails.delay, &tails.aoi, &tails.doi].map(|t| t.min().unwrap_or(f64::NAN));
    let mut rows = Vec::new();
    for (metric, tail) in [("delay", &mut tails.delay), ("aoi", &mut tails.aoi), ("doi", &mut tails.doi)] {
        let n = tail.len();
        for &eps in epsilons {
            let q = tail.quantile(eps)?;
            let sigma3 = 3.0 * (eps * (1.0 - eps).max(0.0) / n as f64).sqrt();
            let flag = flags([
                if q.insufficient { "insufficient_samples".to_string() } else { String::new() },
                sim.alpha_rounded.map(|k| format!("alpha_rounded={k}")).unwrap_or_default(),
                format!("sigma3={sigma3:e}"),
                if q.resolution > 0.0 { format!("resolution={:e}", q.resolution) } else { String::new() },
            ]);
            rows.push(CsvRow {
                scenario: key.scenario.clone(),
                policy: key.policy.clone(),
                axis: key.axis.clone(),
                axis_value: key.axis_value,
                utilization: key.utilization,
                metric: metric.to_string(),
                source: Source::Simulation,
                epsilon: eps,
                value: Some(q.value),
                theta_star: None,
                flag,
            });
        }
    }
    Ok(SimulationOutcome { rows, minima })
}
