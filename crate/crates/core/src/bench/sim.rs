//! Dense statevector simulation, used only to check that rewrites preserve
//! the circuit unitary.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};

pub const MAX_SIM_QUBITS: u32 = 12;

/// Per-amplitude tolerance of [`equivalent`].
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("{0} qubits exceeds the simulator cap of {MAX_SIM_QUBITS}")]
    TooLarge(u32),
    #[error("basis state {state} out of range for {n_qubits} qubits")]
    BasisOutOfRange { state: usize, n_qubits: u32 },
    #[error("circuits act on {0} and {1} qubits")]
    SizeMismatch(u32, u32),
}

/// `2^n` amplitudes; bit `w` of an index is the value of wire `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    pub amplitudes: Vec<Complex64>,
}

impl Statevector {
    pub fn basis(n_qubits: u32, state: usize) -> Result<Self, SimError> {
        if n_qubits > MAX_SIM_QUBITS {
            return Err(SimError::TooLarge(n_qubits));
        }
        let dim = 1usize << n_qubits;
        if state >= dim {
            return Err(SimError::BasisOutOfRange { state, n_qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[state] = Complex64::new(1.0, 0.0);
        Ok(Statevector { amplitudes })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn apply(&mut self, g: &Gate) {
        match g {
            Gate::H(w) => {
                let bit = 1usize << w.index();
                for i in (0..self.amplitudes.len()).filter(|i| i & bit == 0) {
                    let (a, b) = (self.amplitudes[i], self.amplitudes[i | bit]);
                    self.amplitudes[i] = (a + b) * FRAC_1_SQRT_2;
                    self.amplitudes[i | bit] = (a - b) * FRAC_1_SQRT_2;
                }
            }
            Gate::Cnot { control, targets } => {
                let cbit = 1usize << control.index();
                let flip = targets.iter().fold(0usize, |m, t| m | 1 << t.index());
                for i in 0..self.amplitudes.len() {
                    let j = i ^ flip;
                    if i & cbit != 0 && i < j {
                        self.amplitudes.swap(i, j);
                    }
                }
            }
        }
    }

    fn close_to(&self, other: &Statevector, tol: f64) -> bool {
        self.amplitudes.iter().zip(&other.amplitudes).all(|(a, b)| (a - b).norm_sqr() <= tol * tol)
    }
}

/// Runs `c` on the computational basis state `input`.
pub fn simulate(c: &Circuit, input: usize) -> Result<Statevector, SimError> {
    let mut sv = Statevector::basis(c.n_qubits(), input)?;
    for g in c.gates() {
        sv.apply(g);
    }
    Ok(sv)
}

/// Full unitary comparison: every basis state must map to amplitudes within
/// [`EQUIVALENCE_TOLERANCE`] of each other.
pub fn equivalent(a: &Circuit, b: &Circuit) -> Result<bool, SimError> {
    if a.n_qubits() != b.n_qubits() {
        return Err(SimError::SizeMismatch(a.n_qubits(), b.n_qubits()));
    }
    if a.n_qubits() > MAX_SIM_QUBITS {
        return Err(SimError::TooLarge(a.n_qubits()));
    }
    for k in 0..1usize << a.n_qubits() {
        if !simulate(a, k)?.close_to(&simulate(b, k)?, EQUIVALENCE_TOLERANCE) {
            return Ok(false);
        }
    }
    Ok(true)
}
