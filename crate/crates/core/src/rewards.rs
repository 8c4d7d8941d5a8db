//! Step rewards: depth `Ratio`, Fösel's cost difference, and the exponential
//! `R_pow` built on interaction strength.
//!
//! Each function has a [`Metrics`] form, used by the training loop where the
//! metrics are already known, and a [`Circuit`] form.

use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::circuit::{Circuit, Metrics};

/// Gate-count weight in Fösel's circuit cost `depth - 0.2 * count`.
pub const FOSEL_COUNT_WEIGHT: f64 = 0.2;

/// Upper bound of the APPLY cost term.
pub const MAX_COST_C: f64 = 0.2;

pub const DEFAULT_COST_C: f64 = 0.1;

/// Binary agent action: 0 leaves the circuit alone, 1 applies the rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Reject = 0,
    Apply = 1,
}

impl Action {
    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum RewardKind {
    Ratio,
    Rpow,
    Fosel,
}

impl RewardKind {
    pub fn name(self) -> &'static str {
        match self {
            RewardKind::Ratio => "ratio",
            RewardKind::Rpow => "rpow",
            RewardKind::Fosel => "fosel",
        }
    }
}

impl fmt::Display for RewardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown reward `{0}` (expected ratio, rpow or fosel)")]
pub struct UnknownReward(pub alloc::string::String);

impl FromStr for RewardKind {
    type Err = UnknownReward;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ratio" => Ok(RewardKind::Ratio),
            "rpow" => Ok(RewardKind::Rpow),
            "fosel" => Ok(RewardKind::Fosel),
            _ => Err(UnknownReward(s.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RewardError {
    #[error("reward undefined: circuit after the step has depth 0")]
    EmptyCircuit,
    #[error("cost_c must lie in (0, 0.2], got {0}")]
    CostOutOfRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardParams {
    cost_c: f64,
}

impl RewardParams {
    pub fn new(cost_c: f64) -> Result<Self, RewardError> {
        if cost_c > 0.0 && cost_c <= MAX_COST_C {
            Ok(RewardParams { cost_c })
        } else {
            Err(RewardError::CostOutOfRange(cost_c))
        }
    }

    pub fn cost_c(&self) -> f64 {
        self.cost_c
    }
}

impl Default for RewardParams {
    fn default() -> Self {
        RewardParams { cost_c: DEFAULT_COST_C }
    }
}

/// `sign(x) * |x|^p`, with 0 for `x == 0` for every `p > 0`.
pub fn signed_pow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        libm::copysign(libm::pow(libm::fabs(x), p), x)
    }
}

pub fn ratio_metrics(before: &Metrics, after: &Metrics) -> Result<f64, RewardError> {
    if after.depth == 0 {
        return Err(RewardError::EmptyCircuit);
    }
    Ok(before.depth as f64 / after.depth as f64)
}

/// `depth(before) / depth(after)`.
pub fn ratio(before: &Circuit, after: &Circuit) -> Result<f64, RewardError> {
    ratio_metrics(&before.metrics(), &after.metrics())
}

pub fn fosel_cost_metrics(m: &Metrics) -> f64 {
    m.depth as f64 - FOSEL_COUNT_WEIGHT * m.gate_count as f64
}

/// `depth(c) - 0.2 * gate_count(c)`.
pub fn fosel_cost(c: &Circuit) -> f64 {
    fosel_cost_metrics(&c.metrics())
}

pub fn fosel_reward_metrics(before: &Metrics, after: &Metrics) -> f64 {
    fosel_cost_metrics(before) - fosel_cost_metrics(after)
}

pub fn fosel_reward(before: &Circuit, after: &Circuit) -> f64 {
    fosel_reward_metrics(&before.metrics(), &after.metrics())
}

/// Interaction-strength drop `str(before) - str(after)`, computed from exact
/// incidence sums so that equal strengths give exactly zero.
fn strength_drop(before: &Metrics, after: &Metrics) -> f64 {
    debug_assert_eq!(before.pair_count, after.pair_count);
    match before.pair_count {
        0 => 0.0,
        pairs => (before.interaction_sum as f64 - after.interaction_sum as f64) / pairs as f64,
    }
}

pub fn r_pow_metrics(
    before: &Metrics,
    after: &Metrics,
    action: Action,
    params: &RewardParams,
) -> Result<f64, RewardError> {
    let cost = match action {
        Action::Reject => 0.0,
        Action::Apply => params.cost_c,
    };
    let drop = strength_drop(before, after);
    // A zero base gives a zero term for any exponent, including the
    // unbounded ratio of a step that empties the circuit.
    if drop == 0.0 {
        return Ok(cost);
    }
    let exponent = ratio_metrics(before, after)?;
    Ok(cost + signed_pow(drop, exponent))
}

/// `cost + (str(before) - str(after)) ^ Ratio(before, after)`.
pub fn r_pow(before: &Circuit, after: &Circuit, action: Action, params: &RewardParams) -> Result<f64, RewardError> {
    r_pow_metrics(&before.metrics(), &after.metrics(), action, params)
}

pub fn reward_metrics(
    kind: RewardKind,
    before: &Metrics,
    after: &Metrics,
    action: Action,
    params: &RewardParams,
) -> Result<f64, RewardError> {
    match kind {
        RewardKind::Ratio => ratio_metrics(before, after),
        RewardKind::Fosel => Ok(fosel_reward_metrics(before, after)),
        RewardKind::Rpow => r_pow_metrics(before, after, action, params),
    }
}

pub fn reward(
    kind: RewardKind,
    before: &Circuit,
    after: &Circuit,
    action: Action,
    params: &RewardParams,
) -> Result<f64, RewardError> {
    reward_metrics(kind, &before.metrics(), &after.metrics(), action, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::generate_bv;
    use crate::text::parse_circuit;

    fn circ(text: &str) -> Circuit {
        parse_circuit(text).unwrap()
    }

    fn bv3_opt() -> Circuit {
        circ("qubits 3\nh 0\nh 1\nh 2\ncx 2 0 1\nh 0\nh 1\nh 2\n")
    }

    #[test]
    fn ratio_examples() {
        let bv = generate_bv(3).unwrap();
        assert_eq!(ratio(&bv, &bv), Ok(1.0));
        assert_eq!(ratio(&bv, &bv3_opt()), Ok(4.0 / 3.0));
        assert_eq!(ratio(&bv3_opt(), &bv), Ok(0.75));
        assert_eq!(ratio(&bv, &Circuit::empty(3).unwrap()), Err(RewardError::EmptyCircuit));
    }

    #[test]
    fn fosel_examples() {
        let hh = circ("qubits 1\nh 0\nh 0\n");
        let empty = Circuit::empty(1).unwrap();
        assert_eq!(fosel_cost(&empty), 0.0);
        assert!((fosel_cost(&hh) - 1.6).abs() < 1e-12);
        assert!((fosel_cost(&generate_bv(3).unwrap()) - 2.4).abs() < 1e-12);
        assert_eq!(fosel_reward(&hh, &hh), 0.0);
        assert!((fosel_reward(&hh, &empty) - 1.6).abs() < 1e-12);
        let split = circ("qubits 3\ncx 0 1\ncx 0 2\n");
        let merged = circ("qubits 3\ncx 0 1 2\n");
        assert!((fosel_reward(&split, &merged) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn signed_pow_examples() {
        assert_eq!(signed_pow(0.0, 0.3), 0.0);
        assert_eq!(signed_pow(0.0, f64::INFINITY), 0.0);
        assert_eq!(signed_pow(2.0, 3.0), 8.0);
        assert!((signed_pow(-2.0, 0.5) + core::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn r_pow_examples() {
        let p = RewardParams::new(0.1).unwrap();
        let bv = generate_bv(3).unwrap();
        assert_eq!(r_pow(&bv, &bv, Action::Reject, &p), Ok(0.0));
        let hh = circ("qubits 2\nh 0\nh 0\ncx 0 1\n");
        let cancelled = circ("qubits 2\ncx 0 1\n");
        assert_eq!(r_pow(&hh, &cancelled, Action::Apply, &p), Ok(0.1));
        let before = circ("qubits 2\ncx 0 1\ncx 0 1\nh 0\n");
        let after = circ("qubits 2\nh 0\n");
        let r = r_pow(&before, &after, Action::Apply, &p).unwrap();
        assert!((r - 8.1).abs() < 1e-12);
    }

    #[test]
    fn r_pow_emptying_step() {
        let p = RewardParams::default();
        let hh = circ("qubits 1\nh 0\nh 0\n");
        let empty = Circuit::empty(1).unwrap();
        assert_eq!(r_pow(&hh, &empty, Action::Apply, &p), Ok(0.1));
        let cc = circ("qubits 2\ncx 0 1\ncx 0 1\n");
        let empty2 = Circuit::empty(2).unwrap();
        assert_eq!(r_pow(&cc, &empty2, Action::Apply, &p), Err(RewardError::EmptyCircuit));
    }

    #[test]
    fn dispatch() {
        let p = RewardParams::new(0.2).unwrap();
        let bv = generate_bv(3).unwrap();
        assert_eq!(reward(RewardKind::Ratio, &bv, &bv, Action::Reject, &p), Ok(1.0));
        assert_eq!(reward(RewardKind::Rpow, &bv, &bv, Action::Apply, &p), Ok(0.2));
        let hh = circ("qubits 1\nh 0\nh 0\n");
        let r = reward(RewardKind::Fosel, &hh, &Circuit::empty(1).unwrap(), Action::Apply, &p).unwrap();
        assert!((r - 1.6).abs() < 1e-12);
    }

    #[test]
    fn params_range() {
        assert!(RewardParams::new(0.2).is_ok());
        assert!(RewardParams::new(0.0).is_err());
        assert!(RewardParams::new(0.21).is_err());
        assert!(RewardParams::new(f64::NAN).is_err());
        assert_eq!(RewardParams::default().cost_c(), 0.1);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("rpow".parse::<RewardKind>(), Ok(RewardKind::Rpow));
        assert_eq!("RATIO".parse::<RewardKind>(), Ok(RewardKind::Ratio));
        assert!("pow".parse::<RewardKind>().is_err());
    }
}
