//! Line-oriented circuit text format.
//!
//! ```text
//! # comment
//! qubits 3
//! h 0
//! cx 2 0 1
//! ```
//!
//! The first non-comment line declares the wire count; every following line is
//! one gate. `#` starts a comment anywhere on a line, blank lines are ignored
//! and all indices are 0-based decimal.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {kind}")]
    Line { line: usize, kind: LineError },
    #[error("missing `qubits <n>` header")]
    MissingHeader,
    #[error("input is not valid UTF-8")]
    Utf8,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineError {
    #[error("expected `qubits <n>`, found `{0}`")]
    BadHeader(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("invalid wire index `{0}`")]
    BadIndex(String),
    #[error("`h` takes exactly one wire")]
    HArity,
    #[error("`cx` needs a control and at least one target")]
    CxArity,
    #[error(transparent)]
    Invalid(#[from] CircuitError),
}

pub fn parse_circuit_bytes(bytes: &[u8]) -> Result<Circuit, ParseError> {
    let text = core::str::from_utf8(bytes).map_err(|_| ParseError::Utf8)?;
    parse_circuit(text)
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut n_qubits: Option<u32> = None;
    let mut gates = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |kind: LineError| ParseError::Line { line, kind };
        let mut tokens = content.split_whitespace();
        let head = tokens.next().unwrap_or_default();

        let Some(n) = n_qubits else {
            let n = match (head, tokens.next(), tokens.next()) {
                ("qubits", Some(v), None) => v.parse::<u32>().ok(),
                _ => None,
            };
            match n {
                Some(n) if n > 0 => n_qubits = Some(n),
                Some(_) => return Err(err(CircuitError::NoQubits.into())),
                None => return Err(err(LineError::BadHeader(content.to_string()))),
            }
            continue;
        };

        let wires = tokens
            .map(|t| t.parse::<u32>().map_err(|_| err(LineError::BadIndex(t.to_string()))))
            .collect::<Result<Vec<u32>, _>>()?;
        let gate = match head {
            "h" => match wires.as_slice() {
                [w] => Gate::h(*w),
                _ => return Err(err(LineError::HArity)),
            },
            "cx" => match wires.split_first() {
                Some((c, ts)) if !ts.is_empty() => Gate::cx(*c, ts),
                _ => return Err(err(LineError::CxArity)),
            },
            other => return Err(err(LineError::UnknownGate(other.to_string()))),
        };
        // validate against the header so the error carries this line
        Circuit::new(n, alloc::vec![gate.clone()]).map_err(|e| err(e.into()))?;
        gates.push(gate);
    }

    let n = n_qubits.ok_or(ParseError::MissingHeader)?;
    Ok(Circuit::from_parts_unchecked(n, gates))
}

/// Canonical text form; `parse_circuit(&serialize_circuit(c)) == c`.
pub fn serialize_circuit(c: &Circuit) -> String {
    c.to_string()
}
