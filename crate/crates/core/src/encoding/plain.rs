use super::Encoding;
use crate::circuit::Circuit;
use crate::dfs::CollectiveModel;
use crate::error::Result;
use crate::qft::{GateFactory, PhysicalGates};
use crate::statevector::{StateVector, MAX_QUBITS};

/// No encoding: logical qubits are the physical qubits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Plain;

impl GateFactory for Plain {
    fn n_physical(&self, n_logical: usize) -> usize {
        n_logical
    }

    fn hadamard(&self, k: usize, n: usize) -> Result<Circuit> {
        PhysicalGates.hadamard(k, n)
    }

    fn phase(&self, i: usize, j: usize, theta: f64, n: usize) -> Result<Circuit> {
        PhysicalGates.phase(i, j, theta, n)
    }
}

impl Encoding for Plain {
    fn name(&self) -> &'static str {
        "plain"
    }

    fn physical_per_logical(&self) -> usize {
        1
    }

    fn max_logical(&self) -> usize {
        MAX_QUBITS
    }

    fn model(&self) -> Option<CollectiveModel> {
        None
    }

    fn logical_state(&self, bits: &str) -> Result<StateVector> {
        StateVector::from_bits(bits)
    }
}
