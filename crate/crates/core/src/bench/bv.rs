use alloc::vec::Vec;

use thiserror::Error;

use crate::circuit::{Circuit, Gate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("qubits must be >= 2, got {0}")]
pub struct BvError(pub u32);

/// Bernstein-Vazirani circuit for the all-ones hidden string in {H, CNOT}
/// form: H on every wire, `CX i -> n-1` for each data wire in order, then H
/// on every wire again.
///
/// Depth is `n + 1`, with `2n` Hadamards and `n - 1` CNOTs.
pub fn generate_bv(n: u32) -> Result<Circuit, BvError> {
    if n < 2 {
        return Err(BvError(n));
    }
    let ancilla = n - 1;
    let mut gates = Vec::with_capacity(3 * n as usize - 1);
    gates.extend((0..n).map(Gate::h));
    gates.extend((0..ancilla).map(|i| Gate::cx(i, &[ancilla])));
    gates.extend((0..n).map(Gate::h));
    Ok(Circuit::new(n, gates).expect("bv gates are in range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::serialize_circuit;

    #[test]
    fn bv3_layout() {
        let c = generate_bv(3).unwrap();
        assert_eq!(
            serialize_circuit(&c),
            "qubits 3\nh 0\nh 1\nh 2\ncx 0 2\ncx 1 2\nh 0\nh 1\nh 2\n"
        );
        assert_eq!(c.depth(), 4);
    }

    #[test]
    fn bv2_already_shallow() {
        assert_eq!(generate_bv(2).unwrap().depth(), 3);
    }

    #[test]
    fn bv12_shape() {
        let c = generate_bv(12).unwrap();
        assert_eq!(c.depth(), 13);
        assert_eq!(c.gates().iter().filter(|g| g.is_h()).count(), 24);
        assert_eq!(c.gates().iter().filter(|g| !g.is_h()).count(), 11);
    }

    #[test]
    fn too_small() {
        assert_eq!(generate_bv(1), Err(BvError(1)));
        assert_eq!(generate_bv(0), Err(BvError(0)));
    }
}
