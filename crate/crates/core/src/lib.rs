//! Dense simulation, synthesis and verification of QFT circuits on
//! decoherence-free subspaces.
//!
//! Qubits are 1-based throughout; qubit `t` is bit `t - 1` of a basis index.
//! Circuits list gates in the order they act.

pub mod circuit;
pub mod dfs;
pub mod encoding;
pub mod error;
pub mod linalg;
pub mod noise;
pub mod qft;
pub mod statevector;
pub mod unitary;
pub mod verify;

pub use circuit::{Circuit, Gate, GateKind};
pub use dfs::CollectiveModel;
pub use encoding::{registry, Encoding, EncodingRegistry};
pub use error::{Error, Result};
pub use noise::{NoisePolicy, RunReport};
pub use statevector::{StateVector, C64};
pub use unitary::UnitaryMatrix;

/// Version tag embedded in every machine-readable report.
pub const SCHEMA: &str = "dfsqft/1";
