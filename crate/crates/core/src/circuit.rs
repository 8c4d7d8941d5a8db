//! Gate-list circuit representation and the metrics every reward consumes.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Index of a circuit wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QubitId(pub u32);

impl QubitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for QubitId {
    fn from(v: u32) -> Self {
        QubitId(v)
    }
}

/// A Hadamard, or a CNOT with one control and one or more targets.
///
/// Multi-target CNOTs keep their targets sorted, so two CNOTs with the same
/// target set compare equal regardless of construction order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gate {
    H(QubitId),
    Cnot { control: QubitId, targets: Vec<QubitId> },
}

impl Gate {
    pub fn h(wire: u32) -> Gate {
        Gate::H(QubitId(wire))
    }

    /// CNOT without validation; [`Circuit::new`] rejects bad operands.
    pub fn cx(control: u32, targets: &[u32]) -> Gate {
        let mut targets: Vec<QubitId> = targets.iter().copied().map(QubitId).collect();
        targets.sort_unstable();
        Gate::Cnot { control: QubitId(control), targets }
    }

    pub fn is_h(&self) -> bool {
        matches!(self, Gate::H(_))
    }

    /// Wires touched by this gate, control first.
    pub fn wires(&self) -> impl Iterator<Item = QubitId> + '_ {
        let (first, rest): (QubitId, &[QubitId]) = match self {
            Gate::H(w) => (*w, &[]),
            Gate::Cnot { control, targets } => (*control, targets.as_slice()),
        };
        core::iter::once(first).chain(rest.iter().copied())
    }

    pub fn touches(&self, wire: QubitId) -> bool {
        self.wires().any(|w| w == wire)
    }

    /// Contribution to the gate count: 1 for H, k for a k-target CNOT.
    pub fn weight(&self) -> usize {
        match self {
            Gate::H(_) => 1,
            Gate::Cnot { targets, .. } => targets.len(),
        }
    }

    fn validate(&self, n_qubits: u32) -> Result<(), CircuitError> {
        for w in self.wires() {
            if w.0 >= n_qubits {
                return Err(CircuitError::WireOutOfRange { wire: w.0, n_qubits });
            }
        }
        if let Gate::Cnot { control, targets } = self {
            if targets.is_empty() {
                return Err(CircuitError::NoTargets);
            }
            if targets.contains(control) {
                return Err(CircuitError::ControlInTargets(control.0));
            }
            if targets.windows(2).any(|p| p[0] >= p[1]) {
                // sorted by construction, so equal neighbours are duplicates
                return Err(CircuitError::DuplicateTarget);
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(w) => write!(f, "h {w}"),
            Gate::Cnot { control, targets } => {
                write!(f, "cx {control}")?;
                for t in targets {
                    write!(f, " {t}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("circuit must have at least one qubit")]
    NoQubits,
    #[error("wire {wire} out of range for {n_qubits} qubits")]
    WireOutOfRange { wire: u32, n_qubits: u32 },
    #[error("cnot has no targets")]
    NoTargets,
    #[error("cnot control {0} is also a target")]
    ControlInTargets(u32),
    #[error("cnot has duplicate targets")]
    DuplicateTarget,
    #[error("pair needs two distinct wires, got {0} twice")]
    InvalidPair(u32),
}

/// An ordered gate list over `n_qubits` wires. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Circuit {
    n_qubits: u32,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: u32, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        if n_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        for g in &gates {
            g.validate(n_qubits)?;
        }
        Ok(Circuit { n_qubits, gates })
    }

    pub fn empty(n_qubits: u32) -> Result<Circuit, CircuitError> {
        Circuit::new(n_qubits, Vec::new())
    }

    /// Caller guarantees every gate is valid for `n_qubits`.
    pub(crate) fn from_parts_unchecked(n_qubits: u32, gates: Vec<Gate>) -> Circuit {
        debug_assert!(gates.iter().all(|g| g.validate(n_qubits).is_ok()));
        Circuit { n_qubits, gates }
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn schedule(&self) -> Schedule {
        schedule_asap(self)
    }

    /// ASAP depth; 0 for the empty circuit.
    pub fn depth(&self) -> usize {
        let mut front = vec![0usize; self.n_qubits as usize];
        let mut depth = 0;
        for g in &self.gates {
            let layer = 1 + g.wires().map(|w| front[w.index()]).max().unwrap_or(0);
            for w in g.wires() {
                front[w.index()] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// H gates plus one per CNOT target.
    pub fn gate_count(&self) -> usize {
        self.gates.iter().map(Gate::weight).sum()
    }

    /// Number of control-target incidences on the unordered pair `{a, b}`.
    pub fn pair_strength(&self, a: QubitId, b: QubitId) -> Result<usize, CircuitError> {
        if a == b {
            return Err(CircuitError::InvalidPair(a.0));
        }
        for w in [a, b] {
            if w.0 >= self.n_qubits {
                return Err(CircuitError::WireOutOfRange { wire: w.0, n_qubits: self.n_qubits });
            }
        }
        let count = self
            .gates
            .iter()
            .filter_map(|g| match g {
                Gate::Cnot { control, targets } => Some((control, targets)),
                Gate::H(_) => None,
            })
            .filter(|(c, ts)| (**c == a && ts.contains(&b)) || (**c == b && ts.contains(&a)))
            .count();
        Ok(count)
    }

    /// Sum of pair strengths over all unordered pairs, which is simply the
    /// number of control-target incidences in the circuit.
    pub fn interaction_sum(&self) -> usize {
        self.gates
            .iter()
            .map(|g| match g {
                Gate::Cnot { targets, .. } => targets.len(),
                Gate::H(_) => 0,
            })
            .sum()
    }

    /// Number of unordered wire pairs, `n(n-1)/2`.
    pub fn pair_count(&self) -> usize {
        let n = self.n_qubits as usize;
        n * n.saturating_sub(1) / 2
    }

    /// Mean pair strength over every unordered wire pair; 0 below two wires.
    pub fn interaction_strength(&self) -> f64 {
        match self.pair_count() {
            0 => 0.0,
            pairs => self.interaction_sum() as f64 / pairs as f64,
        }
    }

    pub fn metrics(&self) -> Metrics {
        Metrics {
            depth: self.depth(),
            gate_count: self.gate_count(),
            interaction_sum: self.interaction_sum(),
            pair_count: self.pair_count(),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// The three circuit metrics, with interaction strength kept as an exact
/// numerator/denominator pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    pub depth: usize,
    pub gate_count: usize,
    pub interaction_sum: usize,
    pub pair_count: usize,
}

impl Metrics {
    pub fn interaction_strength(&self) -> f64 {
        match self.pair_count {
            0 => 0.0,
            pairs => self.interaction_sum as f64 / pairs as f64,
        }
    }
}

/// ASAP layer (1-based) for every gate, in program order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub layer_of_gate: Vec<usize>,
}

impl Schedule {
    pub fn depth(&self) -> usize {
        self.layer_of_gate.iter().copied().max().unwrap_or(0)
    }

    /// Gate indices grouped by layer; entry 0 is layer 1.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.depth()];
        for (i, &l) in self.layer_of_gate.iter().enumerate() {
            out[l - 1].push(i);
        }
        out
    }
}

pub fn schedule_asap(c: &Circuit) -> Schedule {
    let mut front = vec![0usize; c.n_qubits as usize];
    let layer_of_gate = c
        .gates
        .iter()
        .map(|g| {
            let layer = 1 + g.wires().map(|w| front[w.index()]).max().unwrap_or(0);
            for w in g.wires() {
                front[w.index()] = layer;
            }
            layer
        })
        .collect();
    Schedule { layer_of_gate }
}
