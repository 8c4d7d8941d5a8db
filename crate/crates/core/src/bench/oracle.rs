use alloc::collections::{BTreeSet, VecDeque};

use crate::circuit::Circuit;
use crate::rewrite::{apply_match, find_matches};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleResult {
    pub min_depth: usize,
    /// The whole reachable rewrite graph was visited within the cap.
    pub exhaustive: bool,
    pub nodes_explored: usize,
}

/// Breadth-first search over the rewrite graph rooted at `c`, visiting at most
/// `node_cap` distinct circuits (deduplicated by exact gate list).
///
/// `min_depth` is the smallest depth among visited circuits. It is the true
/// reachable minimum only when `exhaustive` is set.
pub fn oracle_min_depth(c: &Circuit, node_cap: usize) -> OracleResult {
    oracle_min_depth_observed(c, node_cap, |_| {})
}

/// [`oracle_min_depth`], calling `visit` on every circuit the search admits.
pub fn oracle_min_depth_observed<F: FnMut(&Circuit)>(c: &Circuit, node_cap: usize, mut visit: F) -> OracleResult {
    let mut seen: BTreeSet<Circuit> = BTreeSet::new();
    let mut frontier: VecDeque<Circuit> = VecDeque::new();
    let mut min_depth = c.depth();
    if node_cap > 0 {
        visit(c);
        seen.insert(c.clone());
        frontier.push_back(c.clone());
    }
    let mut capped = node_cap == 0;

    'search: while let Some(node) = frontier.pop_front() {
        for m in find_matches(&node) {
            let next = apply_match(&node, &m).expect("fresh match applies");
            if seen.contains(&next) {
                continue;
            }
            if seen.len() >= node_cap {
                capped = true;
                break 'search;
            }
            min_depth = min_depth.min(next.depth());
            visit(&next);
            seen.insert(next.clone());
            frontier.push_back(next);
        }
    }
    OracleResult { min_depth, exhaustive: !capped && frontier.is_empty(), nodes_explored: seen.len() }
}
