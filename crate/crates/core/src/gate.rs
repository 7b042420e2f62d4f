//! Reversible gate primitives.
//!
//! The gate set is Clifford+Toffoli plus explicit logical-AND markers.
//! `AndCompute`/`AndUncompute` behave like a Toffoli pair on basis states
//! but are kept distinct so the analyzer can cost them separately.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Index of a qubit within one circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QubitId(pub u32);

impl QubitId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Cnot,
    Toffoli,
    AndCompute,
    AndUncompute,
}

impl GateKind {
    pub fn control_arity(self) -> usize {
        match self {
            GateKind::X => 0,
            GateKind::Cnot => 1,
            GateKind::Toffoli | GateKind::AndCompute | GateKind::AndUncompute => 2,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Cnot => "cx",
            GateKind::Toffoli => "ccx",
            GateKind::AndCompute => "and",
            GateKind::AndUncompute => "unand",
        }
    }
}

/// One reversible primitive with its operands.
///
/// Controls are stored in a fixed array; only the first
/// `kind.control_arity()` entries are meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    controls: [QubitId; 2],
    pub target: QubitId,
}

impl Gate {
    pub fn x(target: QubitId) -> Self {
        Gate {
            kind: GateKind::X,
            controls: [QubitId(0); 2],
            target,
        }
    }

    pub fn cnot(control: QubitId, target: QubitId) -> Self {
        Gate {
            kind: GateKind::Cnot,
            controls: [control, control],
            target,
        }
    }

    pub fn toffoli(c1: QubitId, c2: QubitId, target: QubitId) -> Self {
        Gate {
            kind: GateKind::Toffoli,
            controls: [c1, c2],
            target,
        }
    }

    pub fn and_compute(c1: QubitId, c2: QubitId, target: QubitId) -> Self {
        Gate {
            kind: GateKind::AndCompute,
            controls: [c1, c2],
            target,
        }
    }

    pub fn and_uncompute(c1: QubitId, c2: QubitId, target: QubitId) -> Self {
        Gate {
            kind: GateKind::AndUncompute,
            controls: [c1, c2],
            target,
        }
    }

    pub fn controls(&self) -> &[QubitId] {
        &self.controls[..self.kind.control_arity()]
    }

    /// All qubits touched by the gate, target last.
    pub fn operands(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.controls().iter().copied().chain(std::iter::once(self.target))
    }

    /// The same gate with compute/uncompute roles swapped.
    /// X, CNOT and Toffoli are self-inverse.
    pub fn inverted(&self) -> Gate {
        let kind = match self.kind {
            GateKind::AndCompute => GateKind::AndUncompute,
            GateKind::AndUncompute => GateKind::AndCompute,
            k => k,
        };
        Gate { kind, ..*self }
    }

    /// Same gate acting on renumbered qubits.
    pub fn remapped(&self, f: impl Fn(QubitId) -> QubitId) -> Gate {
        Gate {
            kind: self.kind,
            controls: [f(self.controls[0]), f(self.controls[1])],
            target: f(self.target),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.mnemonic())?;
        for c in self.controls() {
            write!(f, " {}", c.0)?;
        }
        write!(f, " {}", self.target.0)
    }
}
