//! IO side of `qopt`: circuit files, per-epoch CSV, JSON summaries, run
//! configuration, the reward-comparison harness and the command line.

pub mod cli;
pub mod config;
pub mod output;
pub mod table1;
