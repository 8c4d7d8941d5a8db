//! Circuit optimization for CNOT+Hadamard circuits by tabular Q-learning over
//! template rewrite rules.
//!
//! The crate is `no_std` (it needs `alloc`) and contains no IO. It provides:
//!
//! * [`circuit`]: the gate-list IR with depth, gate count and interaction
//!   strength metrics, plus the line-oriented text format ([`text`]).
//! * [`rewrite`]: the four template rules (HH cancel, CNOT cancel, CNOT merge,
//!   CNOT reverse), match enumeration and application.
//! * [`rewards`]: the `Ratio`, Fösel and exponential `R_pow` reward functions.
//! * [`qlearn`]: the binary-action Q-learning agent and episode loop.
//! * [`bench`]: Bernstein-Vazirani generator, statevector equivalence oracle,
//!   breadth-first minimum-depth oracle and per-run summaries.
#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod bench;
pub mod circuit;
pub mod qlearn;
pub mod rewards;
pub mod rewrite;
pub mod text;

pub use circuit::{Circuit, CircuitError, Gate, QubitId, Schedule};
pub use qlearn::{AgentConfig, ConfigError, EpochRecord, QTable, StateKey};
pub use rewards::{Action, RewardError, RewardKind, RewardParams};
pub use rewrite::{Match, MatchError, RuleId};
