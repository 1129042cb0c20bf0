//! Pairwise encoding against weak collective decoherence.
//!
//! Logical qubit `t` lives on physical qubits `2t-1` (low) and `2t` (high)
//! with `|0_L> = |01>` and `|1_L> = |10>`, both in the `S_z = 0` eigenspace.
//! Logical qubit `n` is the leftmost pair.

use super::{check_bits, check_logical_index, Encoding};
use crate::circuit::{Circuit, Gate};
use crate::dfs::CollectiveModel;
use crate::error::{Error, Result};
use crate::qft::{BlockedCircuit, GateFactory};
use crate::statevector::{StateVector, MAX_QUBITS};

/// Largest logical register for QFT synthesis (12 physical qubits).
pub const MAX_LOGICAL: usize = 6;

fn check_register(n: usize) -> Result<()> {
    if n == 0 || 2 * n > MAX_QUBITS {
        return Err(Error::OutOfRange {
            what: "n_logical",
            value: n,
            min: 1,
            max: MAX_QUBITS / 2,
        });
    }
    Ok(())
}

/// Encoded computational basis state for bits `s_n ... s_1`.
pub fn wcd_logical_state(bits: &str) -> Result<StateVector> {
    check_bits(bits)?;
    let n = bits.len();
    check_register(n)?;
    let index = bits.bytes().rev().enumerate().fold(0usize, |acc, (t, b)| {
        // pair index: |01> = 1, |10> = 2
        let pair = if b == b'0' { 0b01 } else { 0b10 };
        acc | (pair << (2 * t))
    });
    StateVector::basis(2 * n, index)
}

/// `CN(2k, 2k-1) H(2k) CN(2k, 2k-1)`.
pub fn wcd_hadamard(k: usize, n: usize) -> Result<Circuit> {
    check_register(n)?;
    check_logical_index("k", k, n)?;
    let cn = Gate::cn(2 * k, 2 * k - 1);
    Circuit::from_gates(2 * n, [cn, Gate::h(2 * k), cn])
}

/// `(CN_i CN_j) P(2i, 2j)(theta) (CN_i CN_j)` with `CN_t = CN(2t, 2t-1)`.
pub fn wcd_phase(i: usize, j: usize, theta: f64, n: usize) -> Result<Circuit> {
    check_register(n)?;
    check_logical_index("i", i, n)?;
    check_logical_index("j", j, n)?;
    if i == j {
        return Err(Error::DuplicateQubit(i));
    }
    let cn_i = Gate::cn(2 * i, 2 * i - 1);
    let cn_j = Gate::cn(2 * j, 2 * j - 1);
    Circuit::from_gates(
        2 * n,
        [cn_j, cn_i, Gate::p(2 * i, 2 * j, theta), cn_j, cn_i],
    )
}

/// `U_n = CN(2,1) CN(4,3) ... CN(2n, 2n-1)`.
pub fn wcd_encoder_circuit(n: usize) -> Result<Circuit> {
    check_register(n)?;
    Circuit::from_gates(2 * n, (1..=n).rev().map(|t| Gate::cn(2 * t, 2 * t - 1)))
}

/// `U^-1 inner U` as a circuit: `u`, then `inner`, then `u` inverted.
pub fn conjugate(u: &Circuit, inner: &Circuit) -> Result<Circuit> {
    u.clone().then(inner)?.then(&u.invert())
}

pub fn synth_qft_wcd(n: usize) -> Result<BlockedCircuit> {
    super::synth_encoded_qft(&Wcd, n)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Wcd;

impl GateFactory for Wcd {
    fn n_physical(&self, n_logical: usize) -> usize {
        2 * n_logical
    }

    fn hadamard(&self, k: usize, n: usize) -> Result<Circuit> {
        wcd_hadamard(k, n)
    }

    fn phase(&self, i: usize, j: usize, theta: f64, n: usize) -> Result<Circuit> {
        wcd_phase(i, j, theta, n)
    }
}

impl Encoding for Wcd {
    fn name(&self) -> &'static str {
        "wcd"
    }

    fn physical_per_logical(&self) -> usize {
        2
    }

    fn max_logical(&self) -> usize {
        MAX_LOGICAL
    }

    fn model(&self) -> Option<CollectiveModel> {
        Some(CollectiveModel::Wcd)
    }

    fn logical_state(&self, bits: &str) -> Result<StateVector> {
        wcd_logical_state(bits)
    }
}
