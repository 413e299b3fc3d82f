// SPDX-License-Identifier: Apache-2.0

//! Scenario files: flat `key = value` TOML, one scenario per file.
//!
//! ```toml
//! lambda = 0.5
//! mu = 0.25
//! event_kind = "exponential"    # or "deterministic"
//! service_kind = "exponential"
//! policy = "time"               # or "event"
//! w = [5, 6, 8]                 # scalars or lists
//! epsilon = 1e-6
//! ```

use std::path::Path;

use aoidoi_core::{DistributionModel, TriggerPolicy};
use serde::Deserialize;

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Exponential,
    Deterministic,
}

impl Kind {
    /// Model with mean rate `rate`.
    pub fn model(self, rate: f64) -> Result<DistributionModel> {
        let m = match self {
            Kind::Exponential => DistributionModel::exponential(rate),
            Kind::Deterministic => DistributionModel::deterministic(1.0 / rate),
        };
        m.map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    #[serde(alias = "tt", alias = "time_triggered")]
    Time,
    #[serde(alias = "et", alias = "event_triggered")]
    Event,
}

impl PolicyKind {
    pub fn label(self) -> &'static str {
        match self {
            PolicyKind::Time => "tt",
            PolicyKind::Event => "et",
        }
    }

    pub fn axis(self) -> &'static str {
        match self {
            PolicyKind::Time => "w",
            PolicyKind::Event => "alpha",
        }
    }

    pub fn policy(self, value: f64) -> Result<TriggerPolicy> {
        let p = match self {
            PolicyKind::Time => TriggerPolicy::time_triggered(value),
            PolicyKind::Event => TriggerPolicy::event_triggered_relaxed(value),
        };
        p.map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Utilization,
    W,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Values {
    One(f64),
    Many(Vec<f64>),
}

impl Values {
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            Values::One(v) => vec![*v],
            Values::Many(v) => v.clone(),
        }
    }
}

/// Contents of a scenario or sweep file. Which keys are required depends on
/// the subcommand.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub name: Option<String>,
    pub lambda: f64,
    pub mu: f64,
    pub event_kind: Kind,
    pub service_kind: Kind,
    pub policy: Option<PolicyKind>,
    pub w: Option<Values>,
    pub alpha: Option<Values>,
    pub epsilon: Values,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub burn_in: Option<u64>,
    pub axis: Option<Axis>,
    pub grid: Option<Values>,
    pub couple_alpha: Option<bool>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        if cfg.name.is_none() {
            cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(CliError::Usage(format!("config: {msg}")));
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad("lambda must be positive");
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return bad("mu must be positive");
        }
        if self.epsilon.to_vec().iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return bad("epsilon values must be positive");
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("scenario")
    }

    pub fn event_model(&self) -> Result<DistributionModel> {
        self.event_kind.model(self.lambda)
    }

    pub fn service_model(&self) -> Result<DistributionModel> {
        self.service_kind.model(self.mu)
    }

    pub fn epsilons(&self) -> Vec<f64> {
        self.epsilon.to_vec()
    }

    pub fn policy_kind(&self) -> Result<PolicyKind> {
        self.policy.ok_or_else(|| CliError::Usage("config: missing key `policy`".into()))
    }

    /// Values of the policy parameter (`w` or `alpha`).
    pub fn axis_values(&self) -> Result<Vec<f64>> {
        let kind = self.policy_kind()?;
        let values = match kind {
            PolicyKind::Time => &self.w,
            PolicyKind::Event => &self.alpha,
        };
        values
            .as_ref()
            .map(Values::to_vec)
            .ok_or_else(|| CliError::Usage(format!("config: missing key `{}`", kind.axis())))
    }
}

/// Mean utilization of a policy: `1 / (w mu)` or `lambda / (alpha mu)`.
pub fn utilization(kind: PolicyKind, value: f64, lambda: f64, mu: f64) -> f64 {
    match kind {
        PolicyKind::Time => 1.0 / (value * mu),
        PolicyKind::Event => lambda / (value * mu),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scalars_and_lists() {
        let cfg = Config::parse(
            "lambda = 0.5\nmu = 0.25\nevent_kind = \"exponential\"\nservice_kind = \"deterministic\"\n\
             policy = \"time\"\nw = [5, 6.5, 8]\nepsilon = 1e-6\nseed = 7\n",
        )
        .unwrap();
        assert_eq!(cfg.axis_values().unwrap(), vec![5.0, 6.5, 8.0]);
        assert_eq!(cfg.epsilons(), vec![1e-6]);
        assert_eq!(cfg.service_model().unwrap(), DistributionModel::Deterministic { value: 4.0 });
        assert_eq!(cfg.seed, Some(7));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let base = "lambda = 0.5\nmu = 0.25\nevent_kind = \"exponential\"\nservice_kind = \"exponential\"\nepsilon = 0.1\n";
        assert!(Config::parse(base).is_ok());
        assert!(matches!(Config::parse(&format!("{base}colour = 3\n")), Err(CliError::Usage(_))));
        assert!(Config::parse(&base.replace("0.1", "-1")).is_err());
        assert!(Config::parse(&base.replace("exponential\"\nservice", "poisson\"\nservice")).is_err());
        let cfg = Config::parse(base).unwrap();
        assert!(cfg.axis_values().is_err());
    }

    #[test]
    fn utilization_formulas() {
        assert!((utilization(PolicyKind::Time, 16.0, 0.5, 0.25) - 0.25).abs() < 1e-15);
        assert!((utilization(PolicyKind::Event, 8.0, 0.5, 0.25) - 0.25).abs() < 1e-15);
    }
}
