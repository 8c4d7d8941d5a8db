//! Benchmark circuits, verification oracles and run summaries.

mod bv;
pub mod oracle;
mod sim;
mod summary;

pub use bv::{generate_bv, BvError};
pub use oracle::{oracle_min_depth, OracleResult};
pub use sim::{equivalent, simulate, SimError, Statevector, EQUIVALENCE_TOLERANCE, MAX_SIM_QUBITS};
pub use summary::{aggregate_median, depth_frequency, summarize, SummaryRow};
