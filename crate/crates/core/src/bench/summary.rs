use alloc::vec::Vec;

use crate::qlearn::EpochRecord;
use crate::rewards::RewardKind;

/// One row of the reward comparison table: reward extremes and the extreme
/// final depths with how many epochs ended at them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SummaryRow {
    pub qubits: u32,
    pub reward_kind: RewardKind,
    /// `None` for a median aggregate across seeds.
    pub seed: Option<u64>,
    pub epochs: usize,
    pub min_rew: f64,
    pub max_rew: f64,
    pub min_depth: usize,
    pub freq_min_depth: usize,
    pub max_depth: usize,
    pub freq_max_depth: usize,
}

pub fn depth_frequency(records: &[EpochRecord], depth: usize) -> usize {
    records.iter().filter(|r| r.final_depth == depth).count()
}

/// Reduces a run to its summary row; `None` when no epoch ran.
pub fn summarize(records: &[EpochRecord], qubits: u32, reward_kind: RewardKind, seed: Option<u64>) -> Option<SummaryRow> {
    let first = records.first()?;
    let (mut min_rew, mut max_rew) = (first.cum_reward, first.cum_reward);
    let (mut min_depth, mut max_depth) = (first.final_depth, first.final_depth);
    for r in records {
        min_rew = min_rew.min(r.cum_reward);
        max_rew = max_rew.max(r.cum_reward);
        min_depth = min_depth.min(r.final_depth);
        max_depth = max_depth.max(r.final_depth);
    }
    Some(SummaryRow {
        qubits,
        reward_kind,
        seed,
        epochs: records.len(),
        min_rew,
        max_rew,
        min_depth,
        freq_min_depth: depth_frequency(records, min_depth),
        max_depth,
        freq_max_depth: depth_frequency(records, max_depth),
    })
}

fn lower_median<T: Copy + PartialOrd>(mut v: Vec<T>) -> T {
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in summaries"));
    v[(v.len() - 1) / 2]
}

/// Column-wise (lower) median of per-seed rows sharing size and reward.
pub fn aggregate_median(rows: &[SummaryRow]) -> Option<SummaryRow> {
    let first = rows.first()?;
    let col_f = |f: fn(&SummaryRow) -> f64| lower_median(rows.iter().map(f).collect());
    let col_u = |f: fn(&SummaryRow) -> usize| lower_median(rows.iter().map(f).collect());
    Some(SummaryRow {
        qubits: first.qubits,
        reward_kind: first.reward_kind,
        seed: None,
        epochs: col_u(|r| r.epochs),
        min_rew: col_f(|r| r.min_rew),
        max_rew: col_f(|r| r.max_rew),
        min_depth: col_u(|r| r.min_depth),
        freq_min_depth: col_u(|r| r.freq_min_depth),
        max_depth: col_u(|r| r.max_depth),
        freq_max_depth: col_u(|r| r.freq_max_depth),
    })
}
