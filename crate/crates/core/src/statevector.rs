//! Dense state vectors and the gate kernels.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest register the dense engine accepts.
pub const MAX_QUBITS: usize = 14;

/// Tolerance on the norm of a [`StateVector`].
pub const NORM_TOL: f64 = 1e-12;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// 2x2 matrix acting on one qubit, row-major.
pub type Mat2 = [[C64; 2]; 2];

pub(crate) fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::OutOfRange {
            what: "n_qubits",
            value: n_qubits,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Applies `m` to the qubit at bit position `bit`, optionally conditioned
/// on the bit `control` being set.
pub(crate) fn apply_mat2(amps: &mut [C64], bit: usize, m: &Mat2, control: Option<usize>) {
    let mask = 1usize << bit;
    let cmask = control.map_or(0, |c| 1usize << c);
    for i in 0..amps.len() {
        if i & mask != 0 || i & cmask != cmask {
            continue;
        }
        let j = i | mask;
        let (a0, a1) = (amps[i], amps[j]);
        amps[i] = m[0][0] * a0 + m[0][1] * a1;
        amps[j] = m[1][0] * a0 + m[1][1] * a1;
    }
}

pub(crate) fn gate_matrix(gate: &Gate) -> Mat2 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let rot = |a: f64| {
        let (s, c) = a.sin_cos();
        [
            [C64::new(c, 0.0), C64::new(-s, 0.0)],
            [C64::new(s, 0.0), C64::new(c, 0.0)],
        ]
    };
    match *gate {
        Gate::Hadamard { .. } => [[h, h], [h, -h]],
        Gate::Phase { angle, .. } => [[ONE, ZERO], [ZERO, C64::from_polar(1.0, angle)]],
        Gate::Cnot { .. } => [[ZERO, ONE], [ONE, ZERO]],
        Gate::Rotation { angle, .. } | Gate::ControlledRotation { angle, .. } => rot(angle),
    }
}

/// In-place gate application on raw amplitudes; indices must already be valid.
pub(crate) fn apply_gate_raw(amps: &mut [C64], gate: &Gate) {
    apply_mat2(
        amps,
        gate.target() - 1,
        &gate_matrix(gate),
        gate.control().map(|c| c - 1),
    );
}

pub(crate) fn apply_circuit_raw(amps: &mut [C64], circuit: &Circuit) {
    for g in circuit.gates() {
        apply_gate_raw(amps, g);
    }
}

/// Normalized amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps `amplitudes`, which must have length `2^n_qubits` and unit norm.
    pub fn new(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_register(n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                found: amplitudes.len(),
            });
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Rescales `amplitudes` to unit norm first.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        amplitudes.iter_mut().for_each(|a| *a /= n);
        Self::new(n_qubits, amplitudes)
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::OutOfRange {
                what: "basis index",
                value: index,
                min: 0,
                max: dim - 1,
            });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Basis state from a bit string written `s_n ... s_1`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        if bits.is_empty() || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::InvalidBits(bits.to_string()));
        }
        let index = usize::from_str_radix(bits, 2).map_err(|_| Error::InvalidBits(bits.into()))?;
        Self::basis(bits.len(), index)
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn apply_gate(&self, gate: &Gate) -> Result<Self> {
        gate.validate(self.n_qubits)?;
        let mut amps = self.amplitudes.clone();
        apply_gate_raw(&mut amps, gate);
        Ok(Self::from_raw(self.n_qubits, amps))
    }

    /// Runs every gate of `circuit` in order. The circuit may address fewer
    /// qubits than the state.
    pub fn apply_circuit(&self, circuit: &Circuit) -> Result<Self> {
        if circuit.n_qubits() > self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: circuit.n_qubits(),
            });
        }
        let mut amps = self.amplitudes.clone();
        apply_circuit_raw(&mut amps, circuit);
        Ok(Self::from_raw(self.n_qubits, amps))
    }

    /// Applies a single-qubit unitary to qubit `qubit` (1-based).
    pub fn apply_single(&self, qubit: usize, m: &Mat2) -> Result<Self> {
        if qubit == 0 || qubit > self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        let mut amps = self.amplitudes.clone();
        apply_mat2(&mut amps, qubit - 1, m, None);
        Ok(Self::from_raw(self.n_qubits, amps))
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.same_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise `|a_i - b_i|`.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `c |self>`, renormalized against round-off.
    pub fn scale(&self, c: C64) -> Result<Self> {
        Self::normalized(
            self.n_qubits,
            self.amplitudes.iter().map(|a| a * c).collect(),
        )
    }

    /// Normalized linear combination `sum c_k |v_k>`.
    pub fn superpose(terms: &[(C64, &StateVector)]) -> Result<Self> {
        let first = terms.first().ok_or(Error::NotNormalized(0.0))?.1;
        let mut amps = vec![ZERO; first.dim()];
        for (c, v) in terms {
            first.same_shape(v)?;
            for (a, b) in amps.iter_mut().zip(&v.amplitudes) {
                *a += c * b;
            }
        }
        Self::normalized(first.n_qubits, amps)
    }

    /// Tensor product `|self> (x) |low>`: `low` occupies the low qubits.
    pub fn tensor(&self, low: &StateVector) -> Result<Self> {
        let n = self.n_qubits + low.n_qubits;
        check_register(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for hi in &self.amplitudes {
            amps.extend(low.amplitudes.iter().map(|lo| hi * lo));
        }
        Ok(Self::from_raw(n, amps))
    }

    fn same_shape(&self, other: &StateVector) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(())
    }
}

pub(crate) fn norm(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    state.apply_gate(gate)
}

/// `|<a|b>|^2`, clamped to `[0, 1]`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}

/// Runs `circuit` on each input in parallel.
pub fn apply_circuit_many(circuit: &Circuit, inputs: &[StateVector]) -> Result<Vec<StateVector>> {
    inputs
        .par_iter()
        .map(|s| s.apply_circuit(circuit))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn hadamard_on_zero() {
        let s = StateVector::basis(1, 0)
            .unwrap()
            .apply_gate(&Gate::h(1))
            .unwrap();
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        assert!(close(s.amplitudes()[0], h) && close(s.amplitudes()[1], h));
    }

    #[test]
    fn controlled_phase_only_on_11() {
        let theta = 0.37;
        let g = Gate::p(1, 2, theta);
        let s = StateVector::from_bits("11")
            .unwrap()
            .apply_gate(&g)
            .unwrap();
        assert!(close(s.amplitudes()[3], C64::from_polar(1.0, theta)));
        let s = StateVector::from_bits("01")
            .unwrap()
            .apply_gate(&g)
            .unwrap();
        assert!(close(s.amplitudes()[1], ONE));
        assert_eq!(s.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);
    }

    #[test]
    fn rotation_on_zero() {
        let a = 0.61;
        let s = StateVector::basis(1, 0)
            .unwrap()
            .apply_gate(&Gate::r(1, a))
            .unwrap();
        assert!(close(s.amplitudes()[0], C64::new(a.cos(), 0.0)));
        assert!(close(s.amplitudes()[1], C64::new(a.sin(), 0.0)));
        let s = StateVector::basis(1, 1)
            .unwrap()
            .apply_gate(&Gate::r(1, a))
            .unwrap();
        assert!(close(s.amplitudes()[0], C64::new(-a.sin(), 0.0)));
    }

    #[test]
    fn controlled_rotation_idle_on_control_zero() {
        let g = Gate::cr(2, 1, 1.1);
        let s = StateVector::from_bits("01").unwrap();
        assert_eq!(s.apply_gate(&g).unwrap(), s);
        let s = StateVector::from_bits("10")
            .unwrap()
            .apply_gate(&g)
            .unwrap();
        assert!(close(s.amplitudes()[0b10], C64::new(1.1f64.cos(), 0.0)));
        assert!(close(s.amplitudes()[0b11], C64::new(1.1f64.sin(), 0.0)));
    }

    #[test]
    fn apply_gate_errors() {
        let s = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            s.apply_gate(&Gate::h(3)),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert_eq!(s.apply_gate(&Gate::cn(2, 2)), Err(Error::DuplicateQubit(2)));
    }

    #[test]
    fn fidelity_cases() {
        let z = StateVector::basis(1, 0).unwrap();
        let o = StateVector::basis(1, 1).unwrap();
        assert!((fidelity(&z, &z).unwrap() - 1.0).abs() < 1e-15);
        assert!(fidelity(&z, &o).unwrap().abs() < 1e-15);
        let ph = z.scale(C64::from_polar(1.0, PI / 3.0)).unwrap();
        assert!((fidelity(&z, &ph).unwrap() - 1.0).abs() < 1e-15);
        let two = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            fidelity(&z, &two),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(
            StateVector::new(1, vec![ONE, ONE]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            StateVector::new(2, vec![ONE, ZERO]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(StateVector::basis(MAX_QUBITS + 1, 0).is_err());
        assert!(StateVector::from_bits("012").is_err());
        assert_eq!(StateVector::from_bits("10").unwrap().amplitudes()[2], ONE);
    }

    #[test]
    fn tensor_puts_self_high() {
        let hi = StateVector::from_bits("1").unwrap();
        let lo = StateVector::from_bits("0").unwrap();
        assert_eq!(
            hi.tensor(&lo).unwrap(),
            StateVector::from_bits("10").unwrap()
        );
    }
}
