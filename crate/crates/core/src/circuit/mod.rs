//! Symbolic gates and the circuit IR.
//!
//! Qubits are numbered from 1, and qubit `t` is bit `t - 1` of a basis index,
//! so `|s_n ... s_2 s_1>` has index `s_n 2^(n-1) + ... + s_1`. A [`Circuit`]
//! stores gates in application order: `gates()[0]` acts on the state first.
//! Product notation such as `A B C` (rightmost applied first) is reversed
//! exactly once, by the synthesis code that builds the circuit.

mod text;

pub use text::{format_angle, parse_angle, parse_circuit, print_circuit};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gate mnemonic as it appears in the text format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    P,
    CN,
    R,
    CR,
}

impl GateKind {
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::P => "P",
            GateKind::CN => "CN",
            GateKind::R => "R",
            GateKind::CR => "CR",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<Self> {
        Some(match s {
            "H" => GateKind::H,
            "P" => GateKind::P,
            "CN" => GateKind::CN,
            "R" => GateKind::R,
            "CR" => GateKind::CR,
            _ => return None,
        })
    }

    /// Number of qubit operands.
    pub fn arity(self) -> usize {
        match self {
            GateKind::H | GateKind::R => 1,
            GateKind::P | GateKind::CN | GateKind::CR => 2,
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(self, GateKind::P | GateKind::R | GateKind::CR)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// One elementary gate. Two-qubit gates carry `(control, target)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// Hadamard.
    Hadamard { target: usize },
    /// Controlled phase shift: `e^{i angle}` on `|11>` only.
    Phase {
        control: usize,
        target: usize,
        angle: f64,
    },
    /// Controlled NOT.
    Cnot { control: usize, target: usize },
    /// Real rotation `|0> -> cos a|0> + sin a|1>`, `|1> -> -sin a|0> + cos a|1>`.
    Rotation { target: usize, angle: f64 },
    /// Rotation on `target` when `control` is `|1>`, identity otherwise.
    ControlledRotation {
        control: usize,
        target: usize,
        angle: f64,
    },
}

impl Gate {
    pub fn h(target: usize) -> Self {
        Gate::Hadamard { target }
    }

    pub fn p(control: usize, target: usize, angle: f64) -> Self {
        Gate::Phase {
            control,
            target,
            angle,
        }
    }

    pub fn cn(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn r(target: usize, angle: f64) -> Self {
        Gate::Rotation { target, angle }
    }

    pub fn cr(control: usize, target: usize, angle: f64) -> Self {
        Gate::ControlledRotation {
            control,
            target,
            angle,
        }
    }

    /// Builds a gate from its parts, checking arity and angle presence.
    pub fn from_parts(kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Result<Self> {
        if qubits.len() != kind.arity() || angle.is_some() != kind.has_angle() {
            return Err(Error::Parse {
                line: 0,
                message: format!(
                    "{kind} takes {} qubit(s) and {} angle",
                    kind.arity(),
                    if kind.has_angle() { "one" } else { "no" }
                ),
            });
        }
        let a = angle.unwrap_or(0.0);
        Ok(match kind {
            GateKind::H => Gate::h(qubits[0]),
            GateKind::R => Gate::r(qubits[0], a),
            GateKind::P => Gate::p(qubits[0], qubits[1], a),
            GateKind::CN => Gate::cn(qubits[0], qubits[1]),
            GateKind::CR => Gate::cr(qubits[0], qubits[1], a),
        })
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Hadamard { .. } => GateKind::H,
            Gate::Phase { .. } => GateKind::P,
            Gate::Cnot { .. } => GateKind::CN,
            Gate::Rotation { .. } => GateKind::R,
            Gate::ControlledRotation { .. } => GateKind::CR,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            Gate::Hadamard { .. } | Gate::Rotation { .. } => None,
            Gate::Phase { control, .. }
            | Gate::Cnot { control, .. }
            | Gate::ControlledRotation { control, .. } => Some(control),
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            Gate::Hadamard { target }
            | Gate::Rotation { target, .. }
            | Gate::Phase { target, .. }
            | Gate::Cnot { target, .. }
            | Gate::ControlledRotation { target, .. } => target,
        }
    }

    /// Operands in text order (control first).
    pub fn qubits(&self) -> Vec<usize> {
        match self.control() {
            Some(c) => vec![c, self.target()],
            None => vec![self.target()],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Phase { angle, .. }
            | Gate::Rotation { angle, .. }
            | Gate::ControlledRotation { angle, .. } => Some(angle),
            Gate::Hadamard { .. } | Gate::Cnot { .. } => None,
        }
    }

    pub fn inverse(&self) -> Self {
        match *self {
            Gate::Hadamard { .. } | Gate::Cnot { .. } => *self,
            Gate::Phase {
                control,
                target,
                angle,
            } => Gate::p(control, target, -angle),
            Gate::Rotation { target, angle } => Gate::r(target, -angle),
            Gate::ControlledRotation {
                control,
                target,
                angle,
            } => Gate::cr(control, target, -angle),
        }
    }

    /// Checks operand indices against a register of `n_qubits`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q == 0 || q > n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
        }
        if self.control() == Some(self.target()) {
            return Err(Error::DuplicateQubit(self.target()));
        }
        Ok(())
    }

    /// The same gate with every qubit index moved by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        let mut g = *self;
        match &mut g {
            Gate::Hadamard { target } | Gate::Rotation { target, .. } => *target += offset,
            Gate::Phase {
                control, target, ..
            }
            | Gate::Cnot { control, target }
            | Gate::ControlledRotation {
                control, target, ..
            } => {
                *control += offset;
                *target += offset;
            }
        }
        g
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        if let Some(a) = self.angle() {
            write!(f, " {}", format_angle(a))?;
        }
        Ok(())
    }
}

/// Ordered gate list on a fixed register, in application order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    /// An empty circuit. Panics if `n_qubits` is zero.
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits > 0, "a circuit needs at least one qubit");
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::OutOfRange {
                what: "n_qubits",
                value: 0,
                min: 1,
                max: usize::MAX,
            });
        }
        let mut c = Circuit::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`, which must not address qubits beyond this register.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        for g in other.gates() {
            self.push(*g)?;
        }
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn then(mut self, other: &Circuit) -> Result<Self> {
        self.append(other)?;
        Ok(self)
    }

    /// Gate list reversed with each gate inverted.
    pub fn invert(&self) -> Self {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind() == kind).count()
    }
}

pub fn invert(circuit: &Circuit) -> Circuit {
    circuit.invert()
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_circuit(self))
    }
}

impl std::str::FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_circuit(s)
    }
}
