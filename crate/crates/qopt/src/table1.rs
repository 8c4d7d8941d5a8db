//! Reward comparison harness: train on Bernstein-Vazirani circuits for every
//! (size, reward, seed) combination and reduce each run to a summary row.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use qopt_core::bench::{aggregate_median, generate_bv, summarize, BvError, SummaryRow};
use qopt_core::qlearn::{train, TrainError};
use qopt_core::{EpochRecord, RewardKind};

use crate::config::{ConfigValueError, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Size(#[from] BvError),
    #[error(transparent)]
    Config(#[from] ConfigValueError),
    #[error("bv{qubits} {kind} seed {seed}: {source}")]
    Train { qubits: u32, kind: RewardKind, seed: u64, source: TrainError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct RunKey {
    pub qubits: u32,
    pub kind: RewardKind,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub key: RunKey,
    pub records: Vec<EpochRecord>,
    pub row: Option<SummaryRow>,
}

#[derive(Debug, Clone)]
pub struct Table1 {
    /// Sorted by size, reward, seed.
    pub runs: Vec<RunResult>,
    /// One median row per (size, reward), same order.
    pub aggregates: Vec<SummaryRow>,
}

impl Table1 {
    pub fn run(&self, qubits: u32, kind: RewardKind, seed: u64) -> Option<&RunResult> {
        self.runs.iter().find(|r| r.key == RunKey { qubits, kind, seed })
    }

    pub fn runs_for(&self, qubits: u32, kind: RewardKind) -> impl Iterator<Item = &RunResult> {
        self.runs.iter().filter(move |r| r.key.qubits == qubits && r.key.kind == kind)
    }
}

fn run_one(key: RunKey, template: &RunConfig) -> Result<RunResult, BenchError> {
    let circuit = generate_bv(key.qubits)?;
    let cfg = template.agent_config(key.qubits, key.kind, key.seed)?;
    let training = train(&circuit, &cfg).map_err(|source| BenchError::Train {
        qubits: key.qubits,
        kind: key.kind,
        seed: key.seed,
        source,
    })?;
    let row = summarize(&training.records, key.qubits, key.kind, Some(key.seed));
    Ok(RunResult { key, records: training.records, row })
}

/// Runs every combination on a pool of `jobs` worker threads. Runs are
/// independent, so the output does not depend on `jobs`.
pub fn run_table1(
    sizes: &[u32],
    kinds: &[RewardKind],
    template: &RunConfig,
    seeds: &[u64],
    jobs: usize,
) -> Result<Table1, BenchError> {
    let mut keys: Vec<RunKey> = sizes
        .iter()
        .flat_map(|&qubits| {
            kinds.iter().flat_map(move |&kind| seeds.iter().map(move |&seed| RunKey { qubits, kind, seed }))
        })
        .collect();
    keys.sort();
    keys.dedup();

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Result<RunResult, BenchError>>> = Mutex::new(Vec::with_capacity(keys.len()));
    thread::scope(|s| {
        for _ in 0..jobs.clamp(1, keys.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&key) = keys.get(i) else { break };
                let r = run_one(key, template);
                results.lock().expect("worker panicked").push(r);
            });
        }
    });

    let mut runs = results.into_inner().expect("worker panicked").into_iter().collect::<Result<Vec<_>, _>>()?;
    runs.sort_by_key(|r| r.key);

    let mut aggregates = Vec::new();
    for chunk in runs.chunk_by(|a, b| (a.key.qubits, a.key.kind) == (b.key.qubits, b.key.kind)) {
        let rows: Vec<SummaryRow> = chunk.iter().filter_map(|r| r.row.clone()).collect();
        aggregates.extend(aggregate_median(&rows));
    }
    Ok(Table1 { runs, aggregates })
}
