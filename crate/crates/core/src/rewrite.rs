//! The four template rewrite rules and their matcher.
//!
//! All rules are local: two gates only form a match when no other gate touches
//! any of their wires in between. No commutation analysis is done.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::circuit::{Circuit, Gate, Metrics, QubitId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum RuleId {
    /// `H w; H w` → nothing.
    HhCancel,
    /// Two identical CNOTs → nothing.
    CnotCancel,
    /// Two CNOTs on one control with disjoint targets → one multi-target CNOT.
    CnotMerge,
    /// `CX c→t` → `H c; H t; CX t→c; H c; H t`.
    CnotReverse,
}

impl RuleId {
    pub const ALL: [RuleId; 4] = [RuleId::HhCancel, RuleId::CnotCancel, RuleId::CnotMerge, RuleId::CnotReverse];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleId::HhCancel => "HH_CANCEL",
            RuleId::CnotCancel => "CNOT_CANCEL",
            RuleId::CnotMerge => "CNOT_MERGE",
            RuleId::CnotReverse => "CNOT_REVERSE",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An applicable rewrite: rule plus the gate positions it consumes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Match {
    pub rule: RuleId,
    /// Strictly increasing gate indices into the source circuit.
    pub positions: Vec<usize>,
    /// Sorted wires touched by the matched gates.
    pub anchor_wires: Vec<QubitId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("{rule} match at {positions:?} does not apply to this circuit")]
    Stale { rule: RuleId, positions: Vec<usize> },
}

/// Per-wire sorted lists of the gate indices touching each wire.
struct WireIndex {
    on_wire: Vec<Vec<usize>>,
}

impl WireIndex {
    fn new(c: &Circuit) -> Self {
        let mut on_wire = vec![Vec::new(); c.n_qubits() as usize];
        for (i, g) in c.gates().iter().enumerate() {
            for w in g.wires() {
                on_wire[w.index()].push(i);
            }
        }
        WireIndex { on_wire }
    }

    /// First gate after `i` touching `w`.
    fn next(&self, w: QubitId, i: usize) -> Option<usize> {
        let list = &self.on_wire[w.index()];
        list.get(list.partition_point(|&x| x <= i)).copied()
    }

    /// No gate strictly between `i` and `j` touches `w`.
    fn clear_between(&self, w: QubitId, i: usize, j: usize) -> bool {
        self.next(w, i).is_none_or(|k| k >= j)
    }
}

fn anchors(gates: &[&Gate]) -> Vec<QubitId> {
    let mut ws: Vec<QubitId> = gates.iter().flat_map(|g| g.wires()).collect();
    ws.sort_unstable();
    ws.dedup();
    ws
}

fn disjoint(a: &[QubitId], b: &[QubitId]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// Pair match for a two-gate rule anchored at gate `i`, if any.
fn pair_match(c: &Circuit, idx: &WireIndex, rule: RuleId, i: usize) -> Option<Match> {
    let gates = c.gates();
    let first = &gates[i];
    let j = match (rule, first) {
        (RuleId::HhCancel, Gate::H(w)) => {
            let j = idx.next(*w, i)?;
            (gates[j] == *first).then_some(j)?
        }
        (RuleId::CnotCancel, Gate::Cnot { control, targets }) => {
            let j = idx.next(*control, i)?;
            let ok = gates[j] == *first && targets.iter().all(|t| idx.clear_between(*t, i, j));
            ok.then_some(j)?
        }
        (RuleId::CnotMerge, Gate::Cnot { control, targets }) => {
            let j = idx.next(*control, i)?;
            let Gate::Cnot { control: c2, targets: t2 } = &gates[j] else {
                return None;
            };
            let ok = c2 == control
                && disjoint(targets, t2)
                && targets.iter().chain(t2.iter()).all(|t| idx.clear_between(*t, i, j));
            ok.then_some(j)?
        }
        _ => return None,
    };
    Some(Match { rule, positions: vec![i, j], anchor_wires: anchors(&[first, &gates[j]]) })
}

fn reverse_match(c: &Circuit, i: usize) -> Option<Match> {
    match &c.gates()[i] {
        g @ Gate::Cnot { targets, .. } if targets.len() == 1 => {
            Some(Match { rule: RuleId::CnotReverse, positions: vec![i], anchor_wires: anchors(&[g]) })
        }
        _ => None,
    }
}

/// Every match of the four rules, ordered by rule then by first position.
pub fn find_matches(c: &Circuit) -> Vec<Match> {
    let idx = WireIndex::new(c);
    let n = c.len();
    let mut out = Vec::new();
    for rule in RuleId::ALL {
        for i in 0..n {
            let m = match rule {
                RuleId::CnotReverse => reverse_match(c, i),
                _ => pair_match(c, &idx, rule, i),
            };
            out.extend(m);
        }
    }
    out
}

/// Re-derives `m` from the circuit; only matches `find_matches` would produce
/// are accepted.
pub fn validate_match(c: &Circuit, m: &Match) -> Result<(), MatchError> {
    let stale = || MatchError::Stale { rule: m.rule, positions: m.positions.clone() };
    let &first = m.positions.first().ok_or_else(stale)?;
    if first >= c.len() {
        return Err(stale());
    }
    let found = match m.rule {
        RuleId::CnotReverse => reverse_match(c, first),
        rule => pair_match(c, &WireIndex::new(c), rule, first),
    };
    match found {
        Some(f) if f == *m => Ok(()),
        _ => Err(stale()),
    }
}

/// Applies `m` to `c`, returning the rewritten circuit. `c` is not modified.
pub fn apply_match(c: &Circuit, m: &Match) -> Result<Circuit, MatchError> {
    validate_match(c, m)?;
    let gates = c.gates();
    let mut out = Vec::with_capacity(gates.len() + 4);
    match m.rule {
        RuleId::HhCancel | RuleId::CnotCancel => {
            let (i, j) = (m.positions[0], m.positions[1]);
            out.extend(gates.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, g)| g.clone()));
        }
        RuleId::CnotMerge => {
            let (i, j) = (m.positions[0], m.positions[1]);
            let (Gate::Cnot { control, targets: t1 }, Gate::Cnot { targets: t2, .. }) = (&gates[i], &gates[j]) else {
                unreachable!("validated merge match");
            };
            let mut targets: Vec<QubitId> = t1.iter().chain(t2.iter()).copied().collect();
            targets.sort_unstable();
            for (k, g) in gates.iter().enumerate() {
                if k == i {
                    out.push(Gate::Cnot { control: *control, targets: targets.clone() });
                } else if k != j {
                    out.push(g.clone());
                }
            }
        }
        RuleId::CnotReverse => {
            let i = m.positions[0];
            let Gate::Cnot { control, targets } = &gates[i] else {
                unreachable!("validated reverse match");
            };
            let (c_w, t_w) = (*control, targets[0]);
            out.extend_from_slice(&gates[..i]);
            out.extend([
                Gate::H(c_w),
                Gate::H(t_w),
                Gate::Cnot { control: t_w, targets: vec![c_w] },
                Gate::H(c_w),
                Gate::H(t_w),
            ]);
            out.extend_from_slice(&gates[i + 1..]);
        }
    }
    Ok(Circuit::from_parts_unchecked(c.n_qubits(), out))
}

/// Metrics of `apply_match(c, m)`.
pub fn tentative_metrics(c: &Circuit, m: &Match) -> Result<Metrics, MatchError> {
    apply_match(c, m).map(|after| after.metrics())
}
