//! Run configuration: CLI flags layered over an optional JSON config file,
//! layered over the built-in defaults.

use std::path::{Path, PathBuf};

use anyhow::Context;
use qopt_core::qlearn::{
    DEFAULT_ALPHA, DEFAULT_EPOCHS, DEFAULT_EPS0, DEFAULT_EPS_DECAY_FRACTION, DEFAULT_EPS_MIN, DEFAULT_GAMMA,
    STEPS_PER_QUBIT,
};
use qopt_core::rewards::DEFAULT_COST_C;
use qopt_core::{AgentConfig, RewardKind, RewardParams};
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "QOPT_SEED";

/// Every setting a run can take; `None` means "not given at this layer".
/// Keys match the long flag names with `-` replaced by `_`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub circuit: Option<PathBuf>,
    pub reward: Option<RewardKind>,
    pub epochs: Option<usize>,
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub eps0: Option<f64>,
    pub eps_min: Option<f64>,
    pub eps_decay_frac: Option<f64>,
    pub cost_c: Option<f64>,
    pub max_steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub best_circuit: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: RunConfig) -> RunConfig {
        RunConfig {
            circuit: self.circuit.or(lower.circuit),
            reward: self.reward.or(lower.reward),
            epochs: self.epochs.or(lower.epochs),
            seed: self.seed.or(lower.seed),
            alpha: self.alpha.or(lower.alpha),
            gamma: self.gamma.or(lower.gamma),
            eps0: self.eps0.or(lower.eps0),
            eps_min: self.eps_min.or(lower.eps_min),
            eps_decay_frac: self.eps_decay_frac.or(lower.eps_decay_frac),
            cost_c: self.cost_c.or(lower.cost_c),
            max_steps: self.max_steps.or(lower.max_steps),
            out: self.out.or(lower.out),
            summary: self.summary.or(lower.summary),
            best_circuit: self.best_circuit.or(lower.best_circuit),
        }
    }

    /// Seed from the config, else from `QOPT_SEED`, else 0.
    pub fn resolved_seed(&self) -> Result<u64, ConfigValueError> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| ConfigValueError(format!("{SEED_ENV}={v} is not a u64"))),
            Err(_) => Ok(0),
        }
    }

    /// Agent configuration for a circuit on `n_qubits` wires, with ranges
    /// checked. `seed` and `reward` are taken as given.
    pub fn agent_config(&self, n_qubits: u32, reward: RewardKind, seed: u64) -> Result<AgentConfig, ConfigValueError> {
        let cost_c = self.cost_c.unwrap_or(DEFAULT_COST_C);
        let reward_params = RewardParams::new(cost_c).map_err(|e| ConfigValueError(e.to_string()))?;
        let cfg = AgentConfig {
            alpha: self.alpha.unwrap_or(DEFAULT_ALPHA),
            gamma: self.gamma.unwrap_or(DEFAULT_GAMMA),
            eps0: self.eps0.unwrap_or(DEFAULT_EPS0),
            eps_min: self.eps_min.unwrap_or(DEFAULT_EPS_MIN),
            eps_decay_fraction: self.eps_decay_frac.unwrap_or(DEFAULT_EPS_DECAY_FRACTION),
            epochs: self.epochs.unwrap_or(DEFAULT_EPOCHS),
            max_steps: self.max_steps.unwrap_or(STEPS_PER_QUBIT * n_qubits as usize),
            seed,
            reward_kind: reward,
            reward_params,
        };
        cfg.validate().map_err(|e| ConfigValueError(e.to_string()))?;
        Ok(cfg)
    }
}

/// A setting outside its allowed range.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigValueError(pub String);
