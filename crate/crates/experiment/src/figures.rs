// SPDX-License-Identifier: Apache-2.0

//! Datasets behind the published figures, at desk-scale sample budgets.

use aoidoi_core::optimize::{minimize, GRID_POINTS, REL_TOL};
use aoidoi_core::sim::DEFAULT_BURN_IN;
use aoidoi_core::{
    doi_epsilon_bound, exact_mm1_tail, optimize_theta, DistributionModel, Metric, Scenario, TriggerPolicy,
};
use rayon::prelude::*;
use serde_json::json;

use crate::commands::{bound_minima, bound_rows, default_utilization_grid, log_grid, Output};
use crate::config::{utilization, Kind, PolicyKind};
use crate::rows::{CsvRow, Source};
use crate::simulate::{simulation_rows, RowKey, Simulated};
use crate::{CliError, Result, RunOptions, DEFAULT_SAMPLES, DEFAULT_SEED};

pub const FIGURES: [&str; 10] =
    ["fig3", "fig4a", "fig4b", "fig4c", "fig5", "fig6a", "fig6b", "fig6c", "fig7", "fig8"];

/// Violation probability of the utilization and `w` sweeps.
pub const SWEEP_EPSILON: f64 = 1e-6;

pub fn cmd_figure(name: &str, opts: &RunOptions) -> Result<Output> {
    match name {
        "fig3" => fig3(opts),
        "fig4a" => fig4(name, 0.25, Kind::Exponential),
        "fig4b" => fig4(name, 0.5, Kind::Exponential),
        "fig4c" => fig4(name, 1.0, Kind::Exponential),
        "fig5" => fig5(),
        "fig6a" => fig6(name, Kind::Deterministic, Kind::Exponential),
        "fig6b" => fig6(name, Kind::Exponential, Kind::Exponential),
        "fig6c" => fig6(name, Kind::Exponential, Kind::Deterministic),
        "fig7" => fig7(opts),
        "fig8" => fig8(opts),
        other => {
            Err(CliError::Usage(format!("unknown figure `{other}`; expected one of {}", FIGURES.join(", "))))
        }
    }
}

fn exp(rate: f64) -> DistributionModel {
    DistributionModel::exponential(rate).expect("positive rate")
}

fn key(scenario: &str, kind: PolicyKind, axis: &str, axis_value: f64, u: f64) -> RowKey {
    RowKey {
        scenario: scenario.to_string(),
        policy: kind.label().to_string(),
        axis: axis.to_string(),
        axis_value,
        utilization: u,
    }
}

fn keep_metrics(rows: Vec<CsvRow>, metrics: &[&str]) -> Vec<CsvRow> {
    rows.into_iter().filter(|r| metrics.contains(&r.metric.as_str())).collect()
}

/// Bound rows along an epsilon axis: one key per epsilon.
fn epsilon_bound_rows(
    scenario: &str,
    kind: PolicyKind,
    u: f64,
    event: DistributionModel,
    service: DistributionModel,
    policy: TriggerPolicy,
    epsilons: &[f64],
) -> Result<Vec<CsvRow>> {
    let chunks = epsilons
        .par_iter()
        .map(|&eps| bound_rows(&key(scenario, kind, "epsilon", eps, u), event, service, policy, &[eps], ""))
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.concat())
}

fn with_epsilon_axis(mut rows: Vec<CsvRow>) -> Vec<CsvRow> {
    for r in &mut rows {
        r.axis_value = r.epsilon;
    }
    rows
}

/// Least-squares slope of `ln(epsilon)` against the quantile.
pub fn log_tail_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, e)| (a + x, b + e.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, e) in points {
        sxy += (x - mx) * (e.ln() - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Decay of the optimized M|M|1 delay bound over `[1e-9, 1e-3]`.
pub fn mm1_bound_slope() -> Result<f64> {
    let s = Scenario::new(exp(0.5), exp(1.0), TriggerPolicy::event_triggered(1)?, 1e-3)?;
    let points = log_grid(1e-9, 1e-3, 25)
        .into_iter()
        .map(|eps| Ok((optimize_theta(&s.with_epsilon(eps), Metric::Delay)?.value, eps)))
        .collect::<Result<Vec<_>>>()?;
    Ok(log_tail_slope(&points))
}

fn fig3(opts: &RunOptions) -> Result<Output> {
    let (lambda, mu) = (0.5, 1.0);
    let epsilons = log_grid(1e-9, 1e-1, 17);
    let tt = TriggerPolicy::time_triggered(2.0)?;
    let et = TriggerPolicy::event_triggered(1)?;
    let mut rows = Vec::new();
    for (kind, policy) in [(PolicyKind::Time, tt), (PolicyKind::Event, et)] {
        let b = epsilon_bound_rows("fig3", kind, 0.5, exp(lambda), exp(mu), policy, &epsilons)?;
        rows.extend(keep_metrics(b, &["delay"]));
    }
    for &eps in &epsilons {
        rows.push(CsvRow {
            scenario: "fig3".into(),
            policy: "et".into(),
            axis: "epsilon".into(),
            axis_value: eps,
            utilization: 0.5,
            metric: "delay".into(),
            source: Source::Exact,
            epsilon: eps,
            value: Some(exact_mm1_tail(lambda, mu, eps)?),
            theta_star: None,
            flag: String::new(),
        });
    }
    let samples = opts.samples.unwrap_or(DEFAULT_SAMPLES);
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    for (kind, policy) in [(PolicyKind::Time, tt), (PolicyKind::Event, et)] {
        let sim = Simulated::new(exp(lambda), exp(mu), policy, DEFAULT_BURN_IN)?;
        let out = simulation_rows(&key("fig3", kind, "epsilon", 0.0, 0.5), &sim, samples, seed, &epsilons)?;
        rows.extend(with_epsilon_axis(keep_metrics(out.rows, &["delay"])));
    }

    let value = |policy: &str, source: Source, eps: f64| {
        rows.iter()
            .find(|r| r.policy == policy && r.source == source && (r.epsilon / eps - 1.0).abs() < 1e-9)
            .and_then(|r| r.value)
    };
    let checks: Vec<_> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&eps| {
            let (bound, sim) = (value("tt", Source::Bound, eps), value("tt", Source::Simulation, eps));
            let below = matches!((bound, sim), (Some(b), Some(q)) if q <= b);
            json!({ "epsilon": eps, "tt_bound": bound, "tt_simulation": sim, "below": below })
        })
        .collect();
    let summary = json!({
        "et_delay_bound_slope": mm1_bound_slope()?,
        "exact_slope": -(mu - lambda),
        "tt_simulation_below_bound": checks,
        "et_exact_at_1e-9": value("et", Source::Exact, 1e-9),
    });
    Ok(Output { rows, summary: Some(summary) })
}

/// The `w` grid of the delay/AoI comparison: 4.5 to 40 in steps of 0.5.
pub fn w_grid() -> Vec<f64> {
    (9..=80).map(|k| k as f64 * 0.5).collect()
}

fn w_axis_rows(name: &str, lambda: f64, mu: f64, event: Kind, service: Kind) -> Result<Vec<CsvRow>> {
    let (ev, sv) = (event.model(lambda)?, service.model(mu)?);
    let chunks = w_grid()
        .par_iter()
        .map(|&w| {
            let alpha = lambda * w;
            let tt = key(name, PolicyKind::Time, "w", w, utilization(PolicyKind::Time, w, lambda, mu));
            let et = key(name, PolicyKind::Event, "w", w, utilization(PolicyKind::Event, alpha, lambda, mu));
            let mut rows = bound_rows(&tt, ev, sv, TriggerPolicy::time_triggered(w)?, &[SWEEP_EPSILON], "")?;
            rows.extend(bound_rows(
                &et,
                ev,
                sv,
                TriggerPolicy::event_triggered_relaxed(alpha)?,
                &[SWEEP_EPSILON],
                "",
            )?);
            Ok(keep_metrics(rows, &["delay", "aoi"]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.concat())
}

fn fig4(name: &str, lambda: f64, event: Kind) -> Result<Output> {
    let rows = w_axis_rows(name, lambda, 0.25, event, Kind::Exponential)?;
    let summary = serde_json::to_value(bound_minima(&rows))?;
    Ok(Output { rows, summary: Some(summary) })
}

fn fig5() -> Result<Output> {
    let (lambda, mu) = (0.5, 0.25);
    let rows = w_axis_rows("fig5", lambda, mu, Kind::Exponential, Kind::Deterministic)?;
    let dd1_error = rows
        .iter()
        .filter(|r| r.policy == "tt")
        .filter_map(|r| {
            let exact = if r.metric == "delay" { 4.0 } else { 4.0 + r.axis_value };
            r.value.map(|v| (v - exact).abs())
        })
        .fold(0.0, f64::max);
    let et_aoi_min = rows
        .iter()
        .filter(|r| r.policy == "et" && r.metric == "aoi")
        .filter_map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    let high = Scenario::new(
        exp(lambda),
        DistributionModel::deterministic(1.0 / mu)?,
        TriggerPolicy::event_triggered_relaxed(lambda / (0.9 * mu))?,
        SWEEP_EPSILON,
    )?;
    let et_aoi_high = optimize_theta(&high, Metric::PeakAoi)?.value;
    let summary = json!({
        "tt_max_abs_error_vs_dd1": dd1_error,
        "et_aoi_min": et_aoi_min,
        "et_aoi_at_utilization_0.9": et_aoi_high,
        "et_aoi_ratio": et_aoi_high / et_aoi_min,
    });
    Ok(Output { rows, summary: Some(summary) })
}

/// Utilization sweep of delay, AoI and DoI bounds with `lambda = 0.5`,
/// `mu = 0.25`.
pub fn utilization_rows(name: &str, event: Kind, service: Kind) -> Result<Vec<CsvRow>> {
    let (lambda, mu) = (0.5, 0.25);
    let (ev, sv) = (event.model(lambda)?, service.model(mu)?);
    let chunks = default_utilization_grid()
        .par_iter()
        .map(|&u| {
            let (w, alpha) = (1.0 / (u * mu), lambda / (u * mu));
            let tt =
                key(name, PolicyKind::Time, "utilization", u, utilization(PolicyKind::Time, w, lambda, mu));
            let et = key(
                name,
                PolicyKind::Event,
                "utilization",
                u,
                utilization(PolicyKind::Event, alpha, lambda, mu),
            );
            let mut rows = bound_rows(&tt, ev, sv, TriggerPolicy::time_triggered(w)?, &[SWEEP_EPSILON], "")?;
            rows.extend(bound_rows(
                &et,
                ev,
                sv,
                TriggerPolicy::event_triggered_relaxed(alpha)?,
                &[SWEEP_EPSILON],
                "",
            )?);
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.concat())
}

fn fig6(name: &str, event: Kind, service: Kind) -> Result<Output> {
    let rows = utilization_rows(name, event, service)?;
    let minima = bound_minima(&rows);
    let get = |policy: &str, metric: &str| minima.get(&format!("{name}/{policy}/{metric}/1e-6")).copied();
    let mut summary = json!({ "curves": minima });
    if let (Some(aoi), Some(doi)) = (get("tt", "aoi"), get("tt", "doi")) {
        summary["min_aoi_bound"] = json!(aoi.value);
        summary["min_doi_bound"] = json!(doi.value);
        summary["argmin_utilization_aoi"] = json!(aoi.utilization);
        summary["argmin_utilization_doi"] = json!(doi.utilization);
        summary["argmin_utilization"] = json!(0.5 * (aoi.utilization + doi.utilization));
    }
    Ok(Output { rows, summary: Some(summary) })
}

/// DoI-minimizing parameters for exponential events and service.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoiOptima {
    pub alpha: u32,
    pub et_doi: f64,
    pub w: f64,
    pub tt_doi: f64,
}

/// Minimizes the DoI bound over integer thresholds and over real update
/// intervals.
pub fn doi_optima(lambda: f64, mu: f64, epsilon: f64) -> Result<DoiOptima> {
    let (ev, sv) = (exp(lambda), exp(mu));
    let doi = |policy: TriggerPolicy| -> f64 {
        Scenario::new(ev, sv, policy, epsilon)
            .and_then(|s| optimize_theta(&s, Metric::PeakDoi))
            .map(|r| r.value)
            .unwrap_or(f64::INFINITY)
    };
    let (alpha, et_doi) = (1..=200u32)
        .filter_map(|a| TriggerPolicy::event_triggered(a).ok().map(|p| (a, doi(p))))
        .fold((0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best });
    let w_lo = 1.0 / mu * (1.0 + 1e-6);
    let tt = minimize(
        |w| TriggerPolicy::time_triggered(w).map(doi).unwrap_or(f64::INFINITY),
        w_lo,
        w_lo * 50.0,
        GRID_POINTS,
        REL_TOL,
    )
    .ok_or(aoidoi_core::Error::NoFeasibleTheta)?;
    Ok(DoiOptima { alpha, et_doi, w: tt.x, tt_doi: tt.value })
}

fn tail_epsilons() -> Vec<f64> {
    let mut e = log_grid(1e-6, 1e-1, 21);
    e.extend([0.2, 0.5, 0.9, 0.99]);
    e
}

/// Bound and simulation rows of the AoI and DoI tails of one system.
fn tail_rows(
    scenario: &str,
    kind: PolicyKind,
    policy: TriggerPolicy,
    opts: &RunOptions,
) -> Result<(Vec<CsvRow>, [f64; 3])> {
    let (lambda, mu) = (0.5, 0.25);
    let (ev, sv) = (exp(lambda), exp(mu));
    let u = sv.mean() / policy.mean_interval(&ev);
    let epsilons = tail_epsilons();
    let mut rows = keep_metrics(
        epsilon_bound_rows(scenario, kind, u, ev, sv, policy, &epsilons)?,
        &["aoi", "doi", "doi_int"],
    );
    let sim = Simulated::new(ev, sv, policy, DEFAULT_BURN_IN)?;
    let out = simulation_rows(
        &key(scenario, kind, "epsilon", 0.0, u),
        &sim,
        opts.samples.unwrap_or(DEFAULT_SAMPLES),
        opts.seed.unwrap_or(DEFAULT_SEED),
        &epsilons,
    )?;
    rows.extend(with_epsilon_axis(keep_metrics(out.rows, &["aoi", "doi"])));
    Ok((rows, out.minima))
}

fn fig7(opts: &RunOptions) -> Result<Output> {
    let (tt_rows, tt_min) = tail_rows("fig7", PolicyKind::Time, TriggerPolicy::time_triggered(13.0)?, opts)?;
    let (et_rows, et_min) = tail_rows("fig7", PolicyKind::Event, TriggerPolicy::event_triggered(8)?, opts)?;
    let optima = doi_optima(0.5, 0.25, SWEEP_EPSILON)?;
    let summary = json!({
        "argmin_alpha": optima.alpha,
        "min_doi_bound_et": optima.et_doi,
        "argmin_w": optima.w,
        "min_doi_bound_tt": optima.tt_doi,
        "min_doi_ratio": optima.et_doi.max(optima.tt_doi) / optima.et_doi.min(optima.tt_doi),
        "tt_min_simulated_aoi": tt_min[1],
        "et_min_simulated_doi": et_min[2],
    });
    Ok(Output { rows: [tt_rows, et_rows].concat(), summary: Some(summary) })
}

fn fig8(opts: &RunOptions) -> Result<Output> {
    let mut rows = Vec::new();
    let mut doi = serde_json::Map::new();
    let mut systems: Vec<(String, PolicyKind, TriggerPolicy)> = Vec::new();
    for w in [7.0, 13.0, 19.0] {
        systems.push((format!("fig8_w{w}"), PolicyKind::Time, TriggerPolicy::time_triggered(w)?));
    }
    for a in [4, 8, 12] {
        systems.push((format!("fig8_alpha{a}"), PolicyKind::Event, TriggerPolicy::event_triggered(a)?));
    }
    for (name, kind, policy) in systems {
        let (r, _) = tail_rows(&name, kind, policy, opts)?;
        let s = Scenario::new(exp(0.5), exp(0.25), policy, SWEEP_EPSILON)?;
        let best = optimize_theta(&s, Metric::PeakDoi)?;
        doi.insert(
            name,
            json!({ "doi_bound": best.value, "doi_bound_int": doi_epsilon_bound(&s, best.theta_star)?.phi_int }),
        );
        rows.extend(r);
    }
    Ok(Output { rows, summary: Some(json!({ "doi_bound_at_1e-6": doi })) })
}
