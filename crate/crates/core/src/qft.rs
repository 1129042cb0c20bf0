//! QFT gate sequences, the DFT reference matrix, and output-order resolution.
//!
//! The block for qubit `k` applies `H(k)` and then the controlled phases
//! `P(k-1, k)(pi/2)`, ..., `P(1, k)(pi/2^(k-1))`. Blocks run from qubit `n`
//! down to qubit 1. The sequence has no swap gates, so its unitary equals the
//! DFT only up to an output permutation, reported by [`resolve_output_order`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::statevector::{C64, MAX_QUBITS};
use crate::unitary::{circuit_unitary, CMatrix, UnitaryMatrix, UNITARY_TOL};

/// Builds logical one- and two-qubit gates on a fixed physical register.
pub trait GateFactory {
    /// Physical register size for `n_logical` logical qubits.
    fn n_physical(&self, n_logical: usize) -> usize;

    /// Logical Hadamard on logical qubit `k` of `n`.
    fn hadamard(&self, k: usize, n: usize) -> Result<Circuit>;

    /// Logical controlled phase `e^{i theta}` on `|1>_i |1>_j`.
    fn phase(&self, i: usize, j: usize, theta: f64, n: usize) -> Result<Circuit>;
}

/// Plain physical gates: logical qubit `k` is physical qubit `k`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhysicalGates;

impl GateFactory for PhysicalGates {
    fn n_physical(&self, n_logical: usize) -> usize {
        n_logical
    }

    fn hadamard(&self, k: usize, n: usize) -> Result<Circuit> {
        Circuit::from_gates(n, [Gate::h(k)])
    }

    fn phase(&self, i: usize, j: usize, theta: f64, n: usize) -> Result<Circuit> {
        Circuit::from_gates(n, [Gate::p(i, j, theta)])
    }
}

/// A circuit together with the positions that separate its logical blocks.
///
/// `boundaries` starts at 0, ends at `circuit.len()`, and is strictly
/// increasing; block `b` is `gates[boundaries[b]..boundaries[b + 1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockedCircuit {
    pub circuit: Circuit,
    pub boundaries: Vec<usize>,
}

impl BlockedCircuit {
    pub fn n_blocks(&self) -> usize {
        self.boundaries.len().saturating_sub(1)
    }
}

/// `pi / 2^m`, computed so that the printer recognizes it symbolically.
pub fn pi_over_pow2(m: u32) -> f64 {
    PI / (1u64 << m) as f64
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            min: 1,
            max,
        });
    }
    Ok(())
}

/// The QFT scaffold with factory-produced blocks, plus block boundaries.
pub fn synth_logical_qft_blocks(n: usize, factory: &dyn GateFactory) -> Result<BlockedCircuit> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "n",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let mut circuit = Circuit::new(factory.n_physical(n));
    let mut boundaries = vec![0];
    for k in (1..=n).rev() {
        circuit.append(&factory.hadamard(k, n)?)?;
        boundaries.push(circuit.len());
        for i in (1..k).rev() {
            let theta = pi_over_pow2((k - i) as u32);
            circuit.append(&factory.phase(i, k, theta, n)?)?;
            boundaries.push(circuit.len());
        }
    }
    Ok(BlockedCircuit {
        circuit,
        boundaries,
    })
}

pub fn synth_logical_qft(n: usize, factory: &dyn GateFactory) -> Result<Circuit> {
    synth_logical_qft_blocks(n, factory).map(|b| b.circuit)
}

/// The swap-free QFT on `n` physical qubits, in application order.
pub fn synth_qft(n: usize) -> Result<Circuit> {
    check_n(n, MAX_QUBITS)?;
    synth_logical_qft(n, &PhysicalGates)
}

/// `F[(row, col)] = 2^(-n/2) exp(2 pi i row col / 2^n)`.
pub fn dft_matrix(n: usize) -> Result<UnitaryMatrix> {
    check_n(n, MAX_QUBITS)?;
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    let m = CMatrix::from_fn(dim, dim, |row, col| {
        // reduce mod 2^n before converting so large products stay exact
        let k = (row * col) % dim;
        C64::from_polar(scale, 2.0 * PI * k as f64 / dim as f64)
    });
    UnitaryMatrix::new(m)
}

/// Output permutation relating the swap-free QFT to the DFT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputOrder {
    Identity,
    BitReversal,
}

impl OutputOrder {
    pub const CANDIDATES: [OutputOrder; 2] = [OutputOrder::Identity, OutputOrder::BitReversal];

    /// Where basis index `x` is sent.
    pub fn map(self, x: usize, n: usize) -> usize {
        match self {
            OutputOrder::Identity => x,
            OutputOrder::BitReversal => reverse_bits(x, n),
        }
    }

    /// `Q * m`: row `x` of `m` moves to row `map(x)`.
    pub fn permute_rows(self, m: &UnitaryMatrix, n: usize) -> Result<UnitaryMatrix> {
        let src = m.matrix();
        let mut out = CMatrix::zeros(src.nrows(), src.ncols());
        for x in 0..src.nrows() {
            out.set_row(self.map(x, n), &src.row(x));
        }
        UnitaryMatrix::new(out)
    }
}

pub fn reverse_bits(x: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, b| acc | (((x >> b) & 1) << (n - 1 - b)))
}

/// Finds `Q` in {identity, bit reversal} with
/// `circuit_unitary(synth_qft(n)) = Q * dft_matrix(n)` up to global phase.
pub fn resolve_output_order(n: usize) -> Result<OutputOrder> {
    check_n(n, 8)?;
    let u = circuit_unitary(&synth_qft(n)?, n)?;
    let f = dft_matrix(n)?;
    for q in OutputOrder::CANDIDATES {
        if u.equal_up_to_phase(&q.permute_rows(&f, n)?, UNITARY_TOL)? {
            return Ok(q);
        }
    }
    Err(Error::NoMatchingConvention)
}

/// `Q_n * dft_matrix(n)`: the matrix every QFT construction must reproduce.
pub fn qft_reference(n: usize) -> Result<UnitaryMatrix> {
    resolve_output_order(n)?.permute_rows(&dft_matrix(n)?, n)
}
