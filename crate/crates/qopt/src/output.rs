//! Output formats: the per-epoch CSV and the JSON objects printed or written
//! by the CLI.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::Context;
use qopt_core::bench::{OracleResult, SummaryRow};
use qopt_core::text::{parse_circuit_bytes, serialize_circuit};
use qopt_core::{Circuit, EpochRecord, RewardKind};
use serde::Serialize;

pub const CSV_HEADER: &str = "epoch,steps,applied,cum_reward,final_depth,final_gate_count,final_str";

/// Rounds to 10 significant digits.
pub fn sig10(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.9e}").parse().expect("formatted float parses")
}

pub fn write_epoch_csv<W: Write>(mut w: W, records: &[EpochRecord]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.epoch,
            r.steps,
            r.applied,
            sig10(r.cum_reward),
            r.final_depth,
            r.final_count,
            sig10(r.final_str)
        )?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct MetricsJson {
    pub depth: usize,
    pub gate_count: usize,
    pub interaction_strength: f64,
}

impl MetricsJson {
    pub fn of(c: &Circuit) -> Self {
        MetricsJson {
            depth: c.depth(),
            gate_count: c.gate_count(),
            interaction_strength: sig10(c.interaction_strength()),
        }
    }
}

pub fn oracle_json(r: &OracleResult) -> String {
    serde_json::to_string(r).expect("oracle result serializes")
}

pub fn summary_json(row: Option<&SummaryRow>) -> String {
    let rounded = row.map(|r| SummaryRow { min_rew: sig10(r.min_rew), max_rew: sig10(r.max_rew), ..r.clone() });
    serde_json::to_string_pretty(&rounded).expect("summary serializes")
}

/// Markdown table with the reward comparison columns.
pub fn summary_markdown(rows: &[SummaryRow]) -> String {
    let mut out = String::from(
        "| qubits | reward | seed | min(rew) | max(rew) | mind | fq(mind) | maxd | fq(maxd) |\n\
         |---|---|---|---|---|---|---|---|---|\n",
    );
    for r in rows {
        let seed = r.seed.map_or_else(|| "median".to_string(), |s| s.to_string());
        out.push_str(&format!(
            "| {} | {} | {} | {:.2} | {:.2} | {} | {} | {} | {} |\n",
            r.qubits, r.reward_kind, seed, r.min_rew, r.max_rew, r.min_depth, r.freq_min_depth, r.max_depth, r.freq_max_depth
        ));
    }
    out
}

pub fn run_file_stem(qubits: u32, kind: RewardKind, seed: u64) -> String {
    format!("bv{qubits}_{kind}_seed{seed}")
}

pub fn read_circuit(path: &Path) -> anyhow::Result<Circuit> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_circuit_bytes(&bytes).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_circuit(path: &Path, c: &Circuit) -> anyhow::Result<()> {
    write_file(path, serialize_circuit(c).as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}
