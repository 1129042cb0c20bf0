//! Logical-qubit encodings behind a common trait, selectable by name.
//!
//! Each [`Encoding`] is a [`GateFactory`] plus the logical basis states it
//! protects. The built-in registry holds `plain`, `wcd` and `scd`; callers
//! can register more.

mod plain;
pub mod scd;
pub mod wcd;

pub use plain::Plain;
pub use scd::Scd;
pub use wcd::Wcd;

use std::sync::OnceLock;

use crate::dfs::CollectiveModel;
use crate::error::{Error, Result};
use crate::qft::{synth_logical_qft_blocks, BlockedCircuit, GateFactory};
use crate::statevector::StateVector;
use crate::unitary::SubspaceBasis;

pub trait Encoding: GateFactory + Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;

    fn physical_per_logical(&self) -> usize;

    /// Largest logical register the QFT synthesis supports.
    fn max_logical(&self) -> usize;

    /// Noise model the encoding protects against, if any.
    fn model(&self) -> Option<CollectiveModel>;

    /// Encoded basis state for a bit string `s_n ... s_1`.
    fn logical_state(&self, bits: &str) -> Result<StateVector>;
}

pub(crate) fn check_bits(bits: &str) -> Result<()> {
    if bits.is_empty() || !bits.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::InvalidBits(bits.to_string()));
    }
    Ok(())
}

pub(crate) fn check_logical_index(what: &'static str, k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::OutOfRange {
            what,
            value: k,
            min: 1,
            max: n,
        });
    }
    Ok(())
}

/// Bit string of logical index `l` on `n` logical qubits, `s_n` first.
pub fn logical_bits(l: usize, n: usize) -> String {
    (0..n)
        .rev()
        .map(|b| if (l >> b) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Encoded basis `|l>` for `l = 0 .. 2^n`, in logical index order.
pub fn logical_basis(encoding: &dyn Encoding, n: usize) -> Result<SubspaceBasis> {
    let vectors = (0..1usize << n)
        .map(|l| encoding.logical_state(&logical_bits(l, n)))
        .collect::<Result<Vec<_>>>()?;
    SubspaceBasis::new(vectors)
}

/// The QFT on `n` logical qubits of `encoding`, with logical-block boundaries.
pub fn synth_encoded_qft(encoding: &dyn Encoding, n: usize) -> Result<BlockedCircuit> {
    if n == 0 || n > encoding.max_logical() {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            min: 1,
            max: encoding.max_logical(),
        });
    }
    synth_logical_qft_blocks(n, encoding)
}

/// Encodings addressable by name.
#[derive(Default)]
pub struct EncodingRegistry {
    entries: Vec<Box<dyn Encoding>>,
}

impl EncodingRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        r.register(Box::new(Plain));
        r.register(Box::new(Wcd));
        r.register(Box::new(Scd));
        r
    }

    /// Adds `encoding`, replacing any entry with the same name.
    pub fn register(&mut self, encoding: Box<dyn Encoding>) {
        self.entries.retain(|e| e.name() != encoding.name());
        self.entries.push(encoding);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Encoding> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownEncoding(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|e| e.name())
    }
}

/// The process-wide registry of built-in encodings.
pub fn registry() -> &'static EncodingRegistry {
    static REGISTRY: OnceLock<EncodingRegistry> = OnceLock::new();
    REGISTRY.get_or_init(EncodingRegistry::with_builtins)
}
