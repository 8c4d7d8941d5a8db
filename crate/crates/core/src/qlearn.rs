//! Tabular Q-learning over binary accept/reject decisions.
//!
//! Each step of an episode draws one applicable rewrite uniformly at random,
//! encodes it as a [`StateKey`] (rule plus the signs of the depth, gate count
//! and interaction strength changes it would cause) and asks the agent whether
//! to apply it.

use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Metrics};
use crate::rewards::{reward_metrics, Action, RewardError, RewardKind, RewardParams};
use crate::rewrite::{apply_match, find_matches, Match, MatchError, RuleId};

/// Deterministic generator used for every training run.
pub type AgentRng = ChaCha8Rng;

pub fn agent_rng(seed: u64) -> AgentRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sign(o: Ordering) -> i8 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Discrete state: the candidate's rule and the sign of each metric's
/// decrease (`before - after`) if it were applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateKey {
    pub rule: RuleId,
    pub d_depth: i8,
    pub d_count: i8,
    pub d_str: i8,
}

impl StateKey {
    pub const COUNT: usize = 4 * 27;

    pub fn new(rule: RuleId, d_depth: i8, d_count: i8, d_str: i8) -> StateKey {
        debug_assert!([d_depth, d_count, d_str].iter().all(|d| (-1..=1).contains(d)));
        StateKey { rule, d_depth, d_count, d_str }
    }

    pub fn from_metrics(rule: RuleId, before: &Metrics, after: &Metrics) -> StateKey {
        StateKey::new(
            rule,
            sign(before.depth.cmp(&after.depth)),
            sign(before.gate_count.cmp(&after.gate_count)),
            sign(before.interaction_sum.cmp(&after.interaction_sum)),
        )
    }

    pub fn index(&self) -> usize {
        let d = |v: i8| (v + 1) as usize;
        self.rule.index() * 27 + d(self.d_depth) * 9 + d(self.d_count) * 3 + d(self.d_str)
    }

    pub fn from_index(i: usize) -> StateKey {
        assert!(i < Self::COUNT, "state index out of range");
        let d = |v: usize| v as i8 - 1;
        StateKey::new(RuleId::ALL[i / 27], d(i / 9 % 3), d(i / 3 % 3), d(i % 3))
    }
}

/// Action values for every state key; unseen keys read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    values: [[f64; 2]; StateKey::COUNT],
}

impl Default for QTable {
    fn default() -> Self {
        QTable { values: [[0.0; 2]; StateKey::COUNT] }
    }
}

impl QTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, s: StateKey) -> [f64; 2] {
        self.values[s.index()]
    }

    pub fn value(&self, s: StateKey, a: Action) -> f64 {
        self.values[s.index()][a.index()]
    }

    pub fn set(&mut self, s: StateKey, a: Action, v: f64) {
        self.values[s.index()][a.index()] = v;
    }

    pub fn max_value(&self, s: StateKey) -> f64 {
        let [r, a] = self.get(s);
        r.max(a)
    }

    /// Greedy action, ties going to [`Action::Reject`].
    pub fn greedy(&self, s: StateKey) -> Action {
        let [r, a] = self.get(s);
        if a > r {
            Action::Apply
        } else {
            Action::Reject
        }
    }

    /// Keys with at least one non-zero value.
    pub fn entries(&self) -> impl Iterator<Item = (StateKey, [f64; 2])> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v[0] != 0.0 || v[1] != 0.0)
            .map(|(i, v)| (StateKey::from_index(i), *v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ConfigError {
    #[error("alpha must lie in (0, 1], got {0}")]
    Alpha(f64),
    #[error("gamma must lie in [0, 1), got {0}")]
    Gamma(f64),
    #[error("eps0 must lie in [0, 1], got {0}")]
    Eps0(f64),
    #[error("eps_min must lie in [0, eps0], got {0}")]
    EpsMin(f64),
    #[error("eps_decay_fraction must lie in (0, 1], got {0}")]
    DecayFraction(f64),
    #[error("max_steps must be positive")]
    MaxSteps,
}

pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_GAMMA: f64 = 0.9;
pub const DEFAULT_EPS0: f64 = 1.0;
pub const DEFAULT_EPS_MIN: f64 = 0.05;
pub const DEFAULT_EPS_DECAY_FRACTION: f64 = 0.5;
pub const DEFAULT_EPOCHS: usize = 8000;
pub const STEPS_PER_QUBIT: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct AgentConfig {
    pub alpha: f64,
    pub gamma: f64,
    pub eps0: f64,
    pub eps_min: f64,
    pub eps_decay_fraction: f64,
    pub epochs: usize,
    pub max_steps: usize,
    pub seed: u64,
    pub reward_kind: RewardKind,
    pub reward_params: RewardParams,
}

impl AgentConfig {
    /// Defaults for a circuit on `n_qubits` wires (`max_steps = 10 n`).
    pub fn for_qubits(n_qubits: u32, reward_kind: RewardKind) -> AgentConfig {
        AgentConfig {
            alpha: DEFAULT_ALPHA,
            gamma: DEFAULT_GAMMA,
            eps0: DEFAULT_EPS0,
            eps_min: DEFAULT_EPS_MIN,
            eps_decay_fraction: DEFAULT_EPS_DECAY_FRACTION,
            epochs: DEFAULT_EPOCHS,
            max_steps: STEPS_PER_QUBIT * n_qubits as usize,
            seed: 0,
            reward_kind,
            reward_params: RewardParams::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let within = |v: f64, lo: f64, hi: f64| v >= lo && v <= hi;
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(ConfigError::Alpha(self.alpha));
        }
        if !(self.gamma >= 0.0 && self.gamma < 1.0) {
            return Err(ConfigError::Gamma(self.gamma));
        }
        if !within(self.eps0, 0.0, 1.0) {
            return Err(ConfigError::Eps0(self.eps0));
        }
        if !within(self.eps_min, 0.0, self.eps0) {
            return Err(ConfigError::EpsMin(self.eps_min));
        }
        if !(self.eps_decay_fraction > 0.0 && self.eps_decay_fraction <= 1.0) {
            return Err(ConfigError::DecayFraction(self.eps_decay_fraction));
        }
        if self.max_steps == 0 {
            return Err(ConfigError::MaxSteps);
        }
        Ok(())
    }
}

/// Outcome of one episode.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpochRecord {
    pub epoch: usize,
    pub steps: usize,
    pub applied: usize,
    /// Undiscounted sum of the step rewards.
    pub cum_reward: f64,
    pub final_depth: usize,
    pub final_count: usize,
    pub final_str: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrainError {
    #[error("training needs a non-empty start circuit")]
    EmptyStart,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Reward(#[from] RewardError),
    #[error(transparent)]
    Match(#[from] MatchError),
}

/// Successor of a transition in the Q update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Next {
    State(StateKey),
    Terminal,
}

pub fn encode_state(c: &Circuit, m: &Match) -> Result<StateKey, MatchError> {
    let after = apply_match(c, m)?;
    Ok(StateKey::from_metrics(m.rule, &c.metrics(), &after.metrics()))
}

/// Epsilon-greedy choice.
pub fn select_action<R: Rng + ?Sized>(q: &QTable, s: StateKey, epsilon: f64, rng: &mut R) -> Action {
    if rng.gen::<f64>() < epsilon {
        if rng.gen::<bool>() {
            Action::Apply
        } else {
            Action::Reject
        }
    } else {
        q.greedy(s)
    }
}

/// One-step Q-learning backup of `Q(s, a)`.
pub fn q_update(q: &mut QTable, s: StateKey, a: Action, r: f64, next: Next, cfg: &AgentConfig) {
    let max_next = match next {
        Next::State(n) => q.max_value(n),
        Next::Terminal => 0.0,
    };
    let old = q.value(s, a);
    q.set(s, a, old + cfg.alpha * (r + cfg.gamma * max_next - old));
}

/// Linear decay from `eps0` to `eps_min` over the first
/// `eps_decay_fraction * epochs` epochs, flat afterwards.
pub fn epsilon_at(epoch: usize, cfg: &AgentConfig) -> f64 {
    let end = cfg.eps_decay_fraction * cfg.epochs as f64;
    let e = epoch as f64;
    if e >= end {
        cfg.eps_min
    } else {
        cfg.eps0 + (cfg.eps_min - cfg.eps0) * (e / end)
    }
}

/// Final state of an episode.
#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub record: EpochRecord,
    pub final_circuit: Circuit,
}

/// Runs one episode from `start`, updating `q` in place.
pub fn run_epoch<R: Rng + ?Sized>(
    start: &Circuit,
    q: &mut QTable,
    epoch: usize,
    cfg: &AgentConfig,
    rng: &mut R,
) -> Result<Episode, TrainError> {
    run_epoch_observed(start, q, epoch, cfg, rng, |_| {})
}

/// [`run_epoch`], calling `observe` on every circuit the episode passes
/// through, start included.
pub fn run_epoch_observed<R, F>(
    start: &Circuit,
    q: &mut QTable,
    epoch: usize,
    cfg: &AgentConfig,
    rng: &mut R,
    mut observe: F,
) -> Result<Episode, TrainError>
where
    R: Rng + ?Sized,
    F: FnMut(&Circuit),
{
    if start.is_empty() {
        return Err(TrainError::EmptyStart);
    }
    let epsilon = epsilon_at(epoch, cfg);
    let mut circuit = start.clone();
    let mut metrics = circuit.metrics();
    observe(&circuit);

    let mut pending: Option<(StateKey, Action, f64)> = None;
    let (mut steps, mut applied, mut cum_reward) = (0usize, 0usize, 0.0f64);

    while steps < cfg.max_steps {
        let mut matches = find_matches(&circuit);
        if matches.is_empty() {
            break;
        }
        let m = matches.swap_remove(rng.gen_range(0..matches.len()));
        let candidate = apply_match(&circuit, &m)?;
        let candidate_metrics = candidate.metrics();
        let s = StateKey::from_metrics(m.rule, &metrics, &candidate_metrics);

        if let Some((ps, pa, pr)) = pending.take() {
            q_update(q, ps, pa, pr, Next::State(s), cfg);
        }

        let action = select_action(q, s, epsilon, rng);
        let after_metrics = match action {
            Action::Apply => candidate_metrics,
            Action::Reject => metrics,
        };
        let r = reward_metrics(cfg.reward_kind, &metrics, &after_metrics, action, &cfg.reward_params)?;

        steps += 1;
        cum_reward += r;
        if action == Action::Apply {
            applied += 1;
            circuit = candidate;
            metrics = candidate_metrics;
            observe(&circuit);
        }
        pending = Some((s, action, r));
    }
    if let Some((ps, pa, pr)) = pending {
        q_update(q, ps, pa, pr, Next::Terminal, cfg);
    }

    let record = EpochRecord {
        epoch,
        steps,
        applied,
        cum_reward,
        final_depth: metrics.depth,
        final_count: metrics.gate_count,
        final_str: metrics.interaction_strength(),
    };
    Ok(Episode { record, final_circuit: circuit })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Training {
    pub qtable: QTable,
    pub records: Vec<EpochRecord>,
    /// First final circuit reaching the smallest final depth, if any epoch ran.
    pub best: Option<Circuit>,
}

/// `cfg.epochs` episodes from `start`, sharing one table and one seeded
/// random stream.
pub fn train(start: &Circuit, cfg: &AgentConfig) -> Result<Training, TrainError> {
    cfg.validate()?;
    if start.is_empty() {
        return Err(TrainError::EmptyStart);
    }
    let mut rng = agent_rng(cfg.seed);
    let mut qtable = QTable::new();
    let mut records = Vec::with_capacity(cfg.epochs);
    let mut best: Option<Circuit> = None;
    for epoch in 0..cfg.epochs {
        let ep = run_epoch(start, &mut qtable, epoch, cfg, &mut rng)?;
        if best.as_ref().is_none_or(|b| ep.record.final_depth < b.depth()) {
            best = Some(ep.final_circuit);
        }
        records.push(ep.record);
    }
    Ok(Training { qtable, records, best })
}
