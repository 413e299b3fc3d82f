// SPDX-License-Identifier: Apache-2.0

//! Cross-checks between the analytic bounds and the simulator.

use aoidoi_core::bound::{aoi_bound_at, delay_bound_at, ln_aoi_mgf_bound, ln_delay_mgf_bound};
use aoidoi_core::sim::{run_replications, simulate_replication, SimConfig, TailStorage};
use aoidoi_core::{
    doi_tail_probability, exact_mm1_tail, optimize_theta, DistributionModel, Metric, Scenario, TriggerPolicy,
};

fn exp(rate: f64) -> DistributionModel {
    DistributionModel::exponential(rate).unwrap()
}

fn sim(scenario: &Scenario, n_updates: u64) -> SimConfig {
    SimConfig {
        event_model: scenario.event_model,
        service_model: scenario.service_model,
        policy: scenario.policy,
        burn_in: 10_000,
        n_updates,
    }
}

#[test]
fn dm1_mgfs_stay_below_bounds() {
    let s = Scenario::new(exp(0.5), exp(1.0), TriggerPolicy::time_triggered(2.0).unwrap(), 1e-6).unwrap();
    let theta = 0.25;
    let env = s.envelopes(theta).unwrap();
    let (mut mt, mut ma, mut n) = (0.0, 0.0, 0u64);
    simulate_replication(&sim(&s, 1_000_000), 77, 0, &mut |t: f64, a: f64, _: u64| {
        mt += (theta * t).exp();
        ma += (theta * a).exp();
        n += 1;
    })
    .unwrap();
    let (mt, ma) = (mt / n as f64, ma / n as f64);
    assert!(mt <= ln_delay_mgf_bound(&env).unwrap().exp(), "E[e^theta T] = {mt}");
    assert!(ma <= ln_aoi_mgf_bound(&env).unwrap().exp(), "E[e^theta Delta] = {ma}");
}

#[test]
fn mm1_quantile_matches_exact_tail() {
    let s = Scenario::new(exp(0.5), exp(1.0), TriggerPolicy::event_triggered(1).unwrap(), 1e-4).unwrap();
    let mut tails = run_replications(&sim(&s, 1_000_000), 10, 2024, &TailStorage::Exact).unwrap();
    let q = tails.delay.quantile(1e-4).unwrap().value;
    let exact = exact_mm1_tail(0.5, 1.0, 1e-4).unwrap();
    assert!((q - exact).abs() / exact < 0.03, "empirical {q} vs exact {exact}");
}

#[test]
fn dm1_quantiles_lie_below_the_bound() {
    let s = Scenario::new(exp(0.5), exp(1.0), TriggerPolicy::time_triggered(2.0).unwrap(), 1e-2).unwrap();
    let mut tails = run_replications(&sim(&s, 1_000_000), 4, 5, &TailStorage::Exact).unwrap();
    for eps in [1e-2, 1e-3, 1e-4] {
        let bound = optimize_theta(&s.with_epsilon(eps), Metric::Delay).unwrap().value;
        let q = tails.delay.quantile(eps).unwrap().value;
        assert!(q <= bound, "eps {eps}: {q} > {bound}");
    }
}

#[test]
fn event_triggered_doi_tail_bound_dominates_simulation() {
    let s = Scenario::new(exp(0.5), exp(0.25), TriggerPolicy::event_triggered(8).unwrap(), 1e-6).unwrap();
    let bound = doi_tail_probability(&s, 0.1, 20).unwrap();
    let (mut over, mut n, mut min_phi) = (0u64, 0u64, u64::MAX);
    for rep in 0..10 {
        simulate_replication(&sim(&s, 1_000_000), 31, rep, &mut |_: f64, _: f64, p: u64| {
            over += u64::from(p > 20);
            min_phi = min_phi.min(p);
            n += 1;
        })
        .unwrap();
    }
    let freq = over as f64 / n as f64;
    let sigma = (freq * (1.0 - freq) / n as f64).sqrt();
    assert!(freq <= bound + 3.0 * sigma, "freq {freq} bound {bound}");
    assert!(min_phi >= 8);
}

#[test]
fn trace_invariants_hold_on_long_runs() {
    for policy in [TriggerPolicy::time_triggered(13.0).unwrap(), TriggerPolicy::event_triggered(8).unwrap()] {
        let s = Scenario::new(exp(0.5), exp(0.25), policy, 1e-3).unwrap();
        let mut samples = Vec::new();
        simulate_replication(&sim(&s, 200_000), 3, 0, &mut |t: f64, a: f64, p: u64| samples.push((t, a, p)))
            .unwrap();
        for w in samples.windows(2) {
            // Delta(n) >= T(n+1)
            assert!(w[0].1 >= w[1].0);
        }
        for &(t, a, p) in &samples {
            assert!(t > 0.0 && a >= t);
            if let TriggerPolicy::EventTriggered { .. } = policy {
                assert!(p >= 8);
            }
        }
        if let TriggerPolicy::TimeTriggered { w } = policy {
            assert!(samples.iter().all(|s| s.1 >= w));
        }
    }
}

#[test]
fn every_probed_theta_is_sound() {
    // a handful of fixed thetas, not only the optimum
    let s = Scenario::new(exp(0.5), exp(0.25), TriggerPolicy::time_triggered(13.0).unwrap(), 1e-3).unwrap();
    let mut tails = run_replications(&sim(&s, 1_000_000), 2, 8, &TailStorage::Exact).unwrap();
    let n = tails.delay.len() as f64;
    let slack = 3.0 * (1e-3 * (1.0 - 1e-3) / n).sqrt();
    for theta in [0.02, 0.05, 0.1, 0.15] {
        if let Ok(t) = delay_bound_at(&s, theta) {
            assert!(tails.delay.exceedances(t) as f64 / n <= 1e-3 + slack);
        }
        if let Ok(a) = aoi_bound_at(&s, theta) {
            assert!(tails.aoi.exceedances(a) as f64 / n <= 1e-3 + slack);
        }
    }
}
