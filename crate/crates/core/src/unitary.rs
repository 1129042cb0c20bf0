//! Dense matrices, orthonormal subspace bases, and restriction of a unitary
//! to a subspace.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::statevector::{apply_circuit_raw, check_register, StateVector, C64, ONE, ZERO};

/// Entrywise tolerance for unitarity and orthonormality checks.
pub const UNITARY_TOL: f64 = 1e-10;

pub type CMatrix = DMatrix<C64>;

/// Dense complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: CMatrix,
}

impl UnitaryMatrix {
    /// Wraps a square matrix. Unitarity is not checked here; see
    /// [`UnitaryMatrix::unitarity_deviation`].
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        Ok(UnitaryMatrix { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMatrix {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<Self> {
        self.same_dim(rhs)?;
        Ok(UnitaryMatrix {
            matrix: &self.matrix * &rhs.matrix,
        })
    }

    /// `max |(U^dagger U - I)_ij|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let g = self.matrix.adjoint() * &self.matrix;
        max_identity_deviation(&g)
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_deviation() <= UNITARY_TOL
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.dim(),
            });
        }
        let v = &self.matrix * nalgebra::DVector::from_column_slice(state.amplitudes());
        Ok(StateVector::from_raw(
            state.n_qubits(),
            v.as_slice().to_vec(),
        ))
    }

    /// Largest entrywise `|A_ij - B_ij|`.
    pub fn max_deviation(&self, other: &UnitaryMatrix) -> Result<f64> {
        self.same_dim(other)?;
        Ok(max_abs_diff(&self.matrix, &other.matrix))
    }

    /// `1 - |tr(A^dagger B)| / dim`: zero iff the matrices agree up to a
    /// global phase (for unitary inputs).
    pub fn phase_distance(&self, other: &UnitaryMatrix) -> Result<f64> {
        self.same_dim(other)?;
        Ok(1.0 - trace_overlap(&self.matrix, &other.matrix).norm() / self.dim() as f64)
    }

    /// Equality up to global phase: `|tr(A^dagger B)| / dim >= 1 - tol`.
    pub fn equal_up_to_phase(&self, other: &UnitaryMatrix, tol: f64) -> Result<bool> {
        Ok(self.phase_distance(other)? <= tol)
    }

    /// Entrywise deviation after removing the best global phase.
    pub fn phase_aligned_deviation(&self, other: &UnitaryMatrix) -> Result<f64> {
        self.same_dim(other)?;
        Ok(phase_aligned_deviation(&self.matrix, &other.matrix))
    }

    fn same_dim(&self, other: &UnitaryMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn max_identity_deviation(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((m[(i, j)] - target).norm());
        }
    }
    worst
}

fn trace_overlap(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `max |B - e^{i phi} A|` with `e^{i phi}` the phase of `tr(A^dagger B)`.
pub fn phase_aligned_deviation(a: &CMatrix, b: &CMatrix) -> f64 {
    let t = trace_overlap(a, b);
    let phase = if t.norm() > 0.0 { t / t.norm() } else { ONE };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (y - phase * x).norm())
        .fold(0.0, f64::max)
}

/// Lowers `circuit` to a dense matrix on `n_qubits`: column `l` is the circuit
/// applied to basis state `l`.
pub fn circuit_unitary(circuit: &Circuit, n_qubits: usize) -> Result<UnitaryMatrix> {
    check_register(n_qubits)?;
    for g in circuit.gates() {
        g.validate(n_qubits)?;
    }
    let dim = 1usize << n_qubits;
    let columns: Vec<Vec<C64>> = (0..dim)
        .into_par_iter()
        .map(|l| {
            let mut amps = vec![ZERO; dim];
            amps[l] = ONE;
            apply_circuit_raw(&mut amps, circuit);
            amps
        })
        .collect();
    let matrix = CMatrix::from_fn(dim, dim, |i, j| columns[j][i]);
    Ok(UnitaryMatrix { matrix })
}

/// Ordered orthonormal set of states on a common register.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    n_qubits: usize,
    vectors: Vec<StateVector>,
}

impl SubspaceBasis {
    /// Checks the Gram matrix against the identity within [`UNITARY_TOL`].
    pub fn new(vectors: Vec<StateVector>) -> Result<Self> {
        let n_qubits =
            vectors
                .first()
                .map(StateVector::n_qubits)
                .ok_or(Error::DimensionMismatch {
                    expected: 1,
                    found: 0,
                })?;
        let basis = SubspaceBasis { n_qubits, vectors };
        let dev = basis.gram_deviation()?;
        if dev > UNITARY_TOL {
            return Err(Error::NotNormalized(1.0 + dev));
        }
        Ok(basis)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    /// `max |<b_i|b_j> - delta_ij|`.
    pub fn gram_deviation(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((a.inner(b)? - target).norm());
            }
        }
        Ok(worst)
    }

    /// Coordinates `<b_i|v>`.
    pub fn coordinates(&self, v: &[C64]) -> Vec<C64> {
        self.vectors
            .iter()
            .map(|b| {
                b.amplitudes()
                    .iter()
                    .zip(v)
                    .map(|(x, y)| x.conj() * y)
                    .sum()
            })
            .collect()
    }

    /// Norm of the part of `v` orthogonal to the span.
    pub fn residual_norm(&self, v: &[C64]) -> f64 {
        let coords = self.coordinates(v);
        let mut r = v.to_vec();
        for (c, b) in coords.iter().zip(&self.vectors) {
            for (ri, bi) in r.iter_mut().zip(b.amplitudes()) {
                *ri -= c * bi;
            }
        }
        crate::statevector::norm(&r)
    }
}

/// Action of a physical operator on a subspace.
#[derive(Debug, Clone)]
pub struct Restriction {
    /// `block[(i, j)] = <b_i| U |b_j>`.
    pub block: CMatrix,
    /// Largest residual norm of `U|b_j>` outside the span.
    pub leakage: f64,
}

impl Restriction {
    fn from_images(basis: &SubspaceBasis, images: &[Vec<C64>]) -> Self {
        let d = basis.dim();
        let mut block = CMatrix::zeros(d, d);
        let mut leakage = 0.0f64;
        for (j, img) in images.iter().enumerate() {
            for (i, c) in basis.coordinates(img).into_iter().enumerate() {
                block[(i, j)] = c;
            }
            leakage = leakage.max(basis.residual_norm(img));
        }
        Restriction { block, leakage }
    }

    pub fn as_unitary(&self) -> UnitaryMatrix {
        UnitaryMatrix {
            matrix: self.block.clone(),
        }
    }
}

pub fn restrict(u: &UnitaryMatrix, basis: &SubspaceBasis) -> Result<Restriction> {
    if u.dim() != 1 << basis.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << basis.n_qubits(),
            found: u.dim(),
        });
    }
    let images: Vec<Vec<C64>> = basis
        .vectors()
        .iter()
        .map(|b| u.apply(b).map(StateVector::into_amplitudes))
        .collect::<Result<_>>()?;
    Ok(Restriction::from_images(basis, &images))
}

/// Same as [`restrict`] on `circuit_unitary(circuit)`, without building the
/// full matrix.
pub fn restrict_circuit(circuit: &Circuit, basis: &SubspaceBasis) -> Result<Restriction> {
    if circuit.n_qubits() > basis.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: basis.n_qubits(),
            found: circuit.n_qubits(),
        });
    }
    let images: Vec<Vec<C64>> = basis
        .vectors()
        .par_iter()
        .map(|b| {
            let mut amps = b.amplitudes().to_vec();
            apply_circuit_raw(&mut amps, circuit);
            amps
        })
        .collect();
    Ok(Restriction::from_images(basis, &images))
}
