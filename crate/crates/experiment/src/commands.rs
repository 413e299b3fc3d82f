// SPDX-License-Identifier: Apache-2.0

//! The `bound`, `simulate` and `sweep` subcommands.

use std::collections::BTreeMap;

use aoidoi_core::sim::DEFAULT_BURN_IN;
use aoidoi_core::{optimize_theta, DistributionModel, Error, Metric, Scenario, TriggerPolicy};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{utilization, Axis, Config, PolicyKind};
use crate::rows::{CsvRow, Source};
use crate::simulate::{simulation_rows, RowKey, Simulated};
use crate::{CliError, Result, RunOptions, DEFAULT_SAMPLES, DEFAULT_SEED};

/// Rows plus an optional machine-readable summary.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub rows: Vec<CsvRow>,
    pub summary: Option<serde_json::Value>,
}

/// Utilization grid used when a sweep file has no `grid`.
pub fn default_utilization_grid() -> Vec<f64> {
    log_grid(0.05, 0.95, 50)
}

/// `n` log-spaced points from `lo` to `hi` inclusive, rounded to 12
/// significant digits so that decades come out as exact literals.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi / lo).ln() / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let x = lo * (step * i as f64).exp();
            format!("{x:.11e}").parse().expect("formatted float")
        })
        .collect()
}

fn check_epsilons(epsilons: &[f64], opts: &RunOptions) -> Result<()> {
    if !opts.allow_vacuous && epsilons.iter().any(|&e| e >= 1.0) {
        return Err(CliError::Usage(
            "epsilon >= 1 gives vacuous bounds; pass --allow-vacuous to emit them".into(),
        ));
    }
    Ok(())
}

fn is_infeasible(e: &Error) -> bool {
    matches!(
        e,
        Error::NoFeasibleTheta | Error::Instability { .. } | Error::Domain { .. } | Error::InfiniteDoi
    )
}

/// Optimized bound rows for all metrics at every epsilon.
///
/// `extra_flag` is appended to every row.
pub fn bound_rows(
    key: &RowKey,
    event: DistributionModel,
    service: DistributionModel,
    policy: TriggerPolicy,
    epsilons: &[f64],
    extra_flag: &str,
) -> Result<Vec<CsvRow>> {
    let mut rows = Vec::new();
    let row = |metric: &str, eps: f64, value: Option<f64>, theta: Option<f64>, flag: String| CsvRow {
        scenario: key.scenario.clone(),
        policy: key.policy.clone(),
        axis: key.axis.clone(),
        axis_value: key.axis_value,
        utilization: key.utilization,
        metric: metric.to_string(),
        source: Source::Bound,
        epsilon: eps,
        value,
        theta_star: theta,
        flag,
    };
    for &eps in epsilons {
        let scenario = Scenario::new(event, service, policy, eps)?;
        let vacuous = if eps >= 1.0 { "vacuous" } else { "" };
        for metric in Metric::ALL {
            let (value, theta, value_int, flag) = match optimize_theta(&scenario, metric) {
                Ok(r) => (Some(r.value), Some(r.theta_star), r.value_int, vacuous),
                Err(e) if is_infeasible(&e) => (None, None, None, "infeasible"),
                Err(e) => return Err(e.into()),
            };
            let flag = crate::rows::flags([flag.to_string(), extra_flag.to_string()]);
            rows.push(row(metric.name(), eps, value, theta, flag.clone()));
            if metric == Metric::PeakDoi {
                rows.push(row("doi_int", eps, value_int.map(|v| v as f64), theta, flag));
            }
        }
    }
    Ok(rows)
}

pub(crate) fn seed(cfg: &Config, opts: &RunOptions) -> u64 {
    opts.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED)
}

pub(crate) fn samples(cfg: &Config, opts: &RunOptions) -> u64 {
    opts.samples.or(cfg.samples).unwrap_or(DEFAULT_SAMPLES)
}

fn key(cfg: &Config, kind: PolicyKind, axis: &str, axis_value: f64, u: f64) -> RowKey {
    RowKey {
        scenario: cfg.name().to_string(),
        policy: kind.label().to_string(),
        axis: axis.to_string(),
        axis_value,
        utilization: u,
    }
}

/// Optimized bounds for each `w` (or `alpha`) of a single-policy file.
pub fn cmd_bound(cfg: &Config, opts: &RunOptions) -> Result<Output> {
    let kind = cfg.policy_kind()?;
    let epsilons = cfg.epsilons();
    check_epsilons(&epsilons, opts)?;
    let (event, service) = (cfg.event_model()?, cfg.service_model()?);
    let chunks = cfg
        .axis_values()?
        .par_iter()
        .map(|&v| {
            let policy = kind.policy(v)?;
            let k = key(cfg, kind, kind.axis(), v, utilization(kind, v, cfg.lambda, cfg.mu));
            bound_rows(&k, event, service, policy, &epsilons, "")
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Output { rows: chunks.concat(), summary: None })
}

/// Empirical quantiles for each `w` (or `alpha`) of a single-policy file.
pub fn cmd_simulate(cfg: &Config, opts: &RunOptions) -> Result<Output> {
    let kind = cfg.policy_kind()?;
    let epsilons = cfg.epsilons();
    let (event, service) = (cfg.event_model()?, cfg.service_model()?);
    let burn_in = cfg.burn_in.unwrap_or(DEFAULT_BURN_IN);
    let mut rows = Vec::new();
    for v in cfg.axis_values()? {
        let sim = Simulated::new(event, service, kind.policy(v)?, burn_in)?;
        let k = key(cfg, kind, kind.axis(), v, utilization(kind, v, cfg.lambda, cfg.mu));
        rows.extend(simulation_rows(&k, &sim, samples(cfg, opts), seed(cfg, opts), &epsilons)?.rows);
    }
    Ok(Output { rows, summary: None })
}

/// Bounds for both policies along a utilization or `w` axis.
pub fn cmd_sweep(cfg: &Config, opts: &RunOptions) -> Result<Output> {
    let epsilons = cfg.epsilons();
    check_epsilons(&epsilons, opts)?;
    let axis = cfg.axis.unwrap_or(Axis::Utilization);
    let couple = cfg.couple_alpha.unwrap_or(true);
    let grid = match (&cfg.grid, axis) {
        (Some(g), _) => g.to_vec(),
        (None, Axis::Utilization) => default_utilization_grid(),
        (None, Axis::W) => cfg
            .w
            .as_ref()
            .map(|w| w.to_vec())
            .ok_or_else(|| CliError::Usage("config: a w sweep needs `grid` or `w`".into()))?,
    };
    if grid.iter().any(|&g| !(g > 0.0 && g.is_finite())) {
        return Err(CliError::Usage("config: grid values must be positive".into()));
    }
    let (event, service) = (cfg.event_model()?, cfg.service_model()?);
    let axis_name = match axis {
        Axis::Utilization => "utilization",
        Axis::W => "w",
    };
    let chunks = grid
        .par_iter()
        .map(|&g| {
            let (w, alpha) = match axis {
                Axis::Utilization => (1.0 / (g * cfg.mu), cfg.lambda / (g * cfg.mu)),
                Axis::W => (g, cfg.lambda * g),
            };
            let (alpha, flag) = if couple {
                (alpha, String::new())
            } else {
                let k = crate::simulate::round_alpha(alpha);
                (k as f64, format!("alpha_rounded={k}"))
            };
            let tt = key(
                cfg,
                PolicyKind::Time,
                axis_name,
                g,
                utilization(PolicyKind::Time, w, cfg.lambda, cfg.mu),
            );
            let et = key(
                cfg,
                PolicyKind::Event,
                axis_name,
                g,
                utilization(PolicyKind::Event, alpha, cfg.lambda, cfg.mu),
            );
            let mut rows = bound_rows(&tt, event, service, PolicyKind::Time.policy(w)?, &epsilons, "")?;
            rows.extend(bound_rows(&et, event, service, PolicyKind::Event.policy(alpha)?, &epsilons, &flag)?);
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = chunks.concat();
    let summary = serde_json::to_value(bound_minima(&rows))?;
    Ok(Output { rows, summary: Some(summary) })
}

/// Smallest bound of one curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveMinimum {
    pub value: f64,
    pub axis_value: f64,
    pub utilization: f64,
}

/// Minimum of each bound curve, keyed `scenario/policy/metric/epsilon`.
pub fn bound_minima(rows: &[CsvRow]) -> BTreeMap<String, CurveMinimum> {
    let mut out: BTreeMap<String, CurveMinimum> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.source == Source::Bound) {
        let Some(value) = r.value else { continue };
        let key = format!("{}/{}/{}/{:e}", r.scenario, r.policy, r.metric, r.epsilon);
        let cand = CurveMinimum { value, axis_value: r.axis_value, utilization: r.utilization };
        out.entry(key)
            .and_modify(|m| {
                if value < m.value {
                    *m = cand;
                }
            })
            .or_insert(cand);
    }
    out
}
