//! Exact simulator for computational basis states.
//!
//! Every gate in the set permutes basis states, so classical bit tracking is
//! a complete model. The AND uncompute is Gidney's measurement-based fixup;
//! on basis states its effect is deterministic provided the target equals
//! the AND of its controls on arrival, which holds by construction for
//! synthesized circuits and is checked here.

use crate::circuit::Circuit;
use crate::gate::GateKind;
use thiserror::Error;

/// Fixed-width bit vector, one bit per qubit, index 0 first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisState {
    pub bits: Vec<bool>,
}

impl BasisState {
    pub fn zeros(width: u32) -> Self {
        BasisState {
            bits: vec![false; width as usize],
        }
    }

    pub fn get(&self, i: u32) -> bool {
        self.bits[i as usize]
    }

    pub fn set(&mut self, i: u32, v: bool) {
        self.bits[i as usize] = v;
    }

    /// Load an integer little-endian into qubits `start..start+width`.
    pub fn load(&mut self, start: u32, width: u32, value: u64) {
        for i in 0..width {
            self.set(start + i, (value >> i) & 1 == 1);
        }
    }

    /// Read qubits `start..start+width` as a little-endian integer.
    pub fn read(&self, start: u32, width: u32) -> u64 {
        (0..width)
            .map(|i| (self.get(start + i) as u64) << i)
            .sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("state width {state} does not match circuit width {circuit}")]
    WidthMismatch { state: u32, circuit: u32 },
    #[error("gate {index}: AND compute target q{target} is not |0>")]
    AndComputeDirty { index: usize, target: u32 },
    #[error("gate {index}: AND uncompute target q{target} does not equal its controls' AND")]
    AndUncomputeMismatch { index: usize, target: u32 },
    #[error("operand {value} out of range for {width}-bit register")]
    OperandOutOfRange { value: u64, width: u32 },
}

/// Apply the circuit to a basis state. Deterministic and total except for
/// AND precondition violations, which indicate a synthesis bug.
pub fn apply(circuit: &Circuit, state: &BasisState) -> Result<BasisState, SimError> {
    if state.bits.len() != circuit.qubit_count() as usize {
        return Err(SimError::WidthMismatch {
            state: state.bits.len() as u32,
            circuit: circuit.qubit_count(),
        });
    }
    let mut bits = state.bits.clone();
    for (index, gate) in circuit.gates.iter().enumerate() {
        let t = gate.target.index();
        match gate.kind {
            GateKind::X => bits[t] = !bits[t],
            GateKind::Cnot => {
                let c = gate.controls()[0].index();
                bits[t] ^= bits[c];
            }
            GateKind::Toffoli => {
                let [c1, c2] = [gate.controls()[0].index(), gate.controls()[1].index()];
                bits[t] ^= bits[c1] & bits[c2];
            }
            GateKind::AndCompute => {
                let [c1, c2] = [gate.controls()[0].index(), gate.controls()[1].index()];
                if bits[t] {
                    return Err(SimError::AndComputeDirty {
                        index,
                        target: gate.target.0,
                    });
                }
                bits[t] = bits[c1] & bits[c2];
            }
            GateKind::AndUncompute => {
                let [c1, c2] = [gate.controls()[0].index(), gate.controls()[1].index()];
                if bits[t] != (bits[c1] & bits[c2]) {
                    return Err(SimError::AndUncomputeMismatch {
                        index,
                        target: gate.target.0,
                    });
                }
                bits[t] = false;
            }
        }
    }
    Ok(BasisState { bits })
}
