//! Circuit intermediate representation: a named register layout over a flat
//! qubit index space plus an ordered gate list.
//!
//! Circuits are immutable after construction in the sense that every
//! operation returns a new value; a builder mutates only its own storage.
//! Gates are stored flat. Layering is never stored here; the analyzer
//! recomputes it on demand.

use crate::gate::{Gate, GateKind, QubitId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// What a register is for. Adder layouts use a subset of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegisterRole {
    InputA,
    InputB,
    PWork,
    GSum,
    CarryOut,
    Ancilla,
    ModulusN,
    Scratch,
}

impl RegisterRole {
    pub fn name(self) -> &'static str {
        match self {
            RegisterRole::InputA => "input_a",
            RegisterRole::InputB => "input_b",
            RegisterRole::PWork => "p_work",
            RegisterRole::GSum => "g_sum",
            RegisterRole::CarryOut => "carry_out",
            RegisterRole::Ancilla => "ancilla",
            RegisterRole::ModulusN => "modulus_n",
            RegisterRole::Scratch => "scratch",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "input_a" => RegisterRole::InputA,
            "input_b" => RegisterRole::InputB,
            "p_work" => RegisterRole::PWork,
            "g_sum" => RegisterRole::GSum,
            "carry_out" => RegisterRole::CarryOut,
            "ancilla" => RegisterRole::Ancilla,
            "modulus_n" => RegisterRole::ModulusN,
            "scratch" => RegisterRole::Scratch,
            _ => return None,
        })
    }
}

/// A contiguous span of qubits with a name and a role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub role: RegisterRole,
    pub start: u32,
    pub width: u32,
}

impl Register {
    pub fn qubit(&self, offset: u32) -> QubitId {
        debug_assert!(offset < self.width);
        QubitId(self.start + offset)
    }

    pub fn qubits(&self) -> impl Iterator<Item = QubitId> + '_ {
        (self.start..self.start + self.width).map(QubitId)
    }
}

/// Ordered register map. Spans must be disjoint and cover `[0, qubit_count)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

impl RegisterLayout {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append a register directly after the current end of the layout.
    /// Returns the new register's span start.
    pub fn push(&mut self, name: impl Into<String>, role: RegisterRole, width: u32) -> u32 {
        let start = self.qubit_count();
        self.registers.push(Register {
            name: name.into(),
            role,
            start,
            width,
        });
        start
    }

    pub fn qubit_count(&self) -> u32 {
        self.registers.last().map_or(0, |r| r.start + r.width)
    }

    pub fn get(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Register> {
        self.registers.iter()
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        let mut expected = 0u32;
        for r in &self.registers {
            if r.start != expected {
                return Err(CircuitError::BrokenLayout {
                    register: r.name.clone(),
                });
            }
            expected = r.start + r.width;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for circuit of {width} qubits")]
    OutOfRange { qubit: QubitId, width: u32 },
    #[error("gate uses qubit {qubit} more than once")]
    DuplicateOperand { qubit: QubitId },
    #[error("register {register} does not start where the previous one ends")]
    BrokenLayout { register: String },
    #[error("no register named {name}")]
    UnknownRegister { name: String },
    #[error("register {name} has width {found}, expected {expected}")]
    WidthMismatch {
        name: String,
        expected: u32,
        found: u32,
    },
    #[error("registers {a} and {b} map to the same target with conflicting roles")]
    RoleConflict { a: String, b: String },
    #[error("gate {index}: AND target {qubit} retargeted before its uncompute")]
    AndDiscipline { index: usize, qubit: QubitId },
}

/// Ordered gate sequence over a declared qubit layout.
///
/// All non-input qubits are declared to start at |0>.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub layout: RegisterLayout,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout) -> Self {
        Circuit {
            layout,
            gates: Vec::new(),
        }
    }

    /// A circuit over anonymous qubits, used mostly by tests.
    pub fn bare(qubit_count: u32) -> Self {
        let mut layout = RegisterLayout::new();
        if qubit_count > 0 {
            layout.push("q", RegisterRole::Scratch, qubit_count);
        }
        Circuit::new(layout)
    }

    pub fn qubit_count(&self) -> u32 {
        self.layout.qubit_count()
    }

    pub fn check_gate(&self, gate: &Gate) -> Result<(), CircuitError> {
        let width = self.qubit_count();
        for q in gate.operands() {
            if q.0 >= width {
                return Err(CircuitError::OutOfRange { qubit: q, width });
            }
        }
        let ops: Vec<QubitId> = gate.operands().collect();
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if ops[i] == ops[j] {
                    return Err(CircuitError::DuplicateOperand { qubit: ops[i] });
                }
            }
        }
        Ok(())
    }

    /// Validated append. Returns a new circuit; the input is unchanged.
    pub fn append(&self, gate: Gate) -> Result<Circuit, CircuitError> {
        self.check_gate(&gate)?;
        let mut out = self.clone();
        out.gates.push(gate);
        Ok(out)
    }

    /// In-place validated push, for builders that own their circuit.
    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        self.check_gate(&gate)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Gate list reversed, AND compute/uncompute swapped.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().map(Gate::inverted).collect(),
        }
    }

    /// Structural validation of every gate plus the AND pairing discipline:
    /// once an `AndCompute` writes a qubit, that qubit must not be targeted
    /// again before a matching `AndUncompute`.
    pub fn validate(&self) -> Result<(), CircuitError> {
        self.layout.validate()?;
        let mut live_and = vec![false; self.qubit_count() as usize];
        for (index, gate) in self.gates.iter().enumerate() {
            self.check_gate(gate)?;
            let t = gate.target.index();
            match gate.kind {
                GateKind::AndCompute => {
                    if live_and[t] {
                        return Err(CircuitError::AndDiscipline {
                            index,
                            qubit: gate.target,
                        });
                    }
                    live_and[t] = true;
                }
                GateKind::AndUncompute => {
                    live_and[t] = false;
                }
                _ => {
                    if live_and[t] {
                        return Err(CircuitError::AndDiscipline {
                            index,
                            qubit: gate.target,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Concatenate `other` onto `self`, identifying registers by name per
    /// `mapping: (name_in_other, name_in_self)`. Unmapped registers of
    /// `other` are allocated fresh qubits at the end of the layout.
    pub fn compose(&self, other: &Circuit, mapping: &[(&str, &str)]) -> Result<Circuit, CircuitError> {
        let mut layout = self.layout.clone();
        // target offset of each `other` register, in other-layout order
        let mut offsets: Vec<(u32, u32, u32)> = Vec::new(); // (other_start, width, self_start)
        for reg in other.layout.iter() {
            let mapped = mapping.iter().find(|(from, _)| *from == reg.name);
            let self_start = match mapped {
                Some((_, to)) => {
                    let target = self.layout.get(to).ok_or_else(|| CircuitError::UnknownRegister {
                        name: to.to_string(),
                    })?;
                    if target.width != reg.width {
                        return Err(CircuitError::WidthMismatch {
                            name: reg.name.clone(),
                            expected: target.width,
                            found: reg.width,
                        });
                    }
                    if target.role != reg.role {
                        return Err(CircuitError::RoleConflict {
                            a: reg.name.clone(),
                            b: target.name.clone(),
                        });
                    }
                    target.start
                }
                None => {
                    let mut name = reg.name.clone();
                    while layout.get(&name).is_some() {
                        name.push('\'');
                    }
                    layout.push(name, reg.role, reg.width)
                }
            };
            offsets.push((reg.start, reg.width, self_start));
        }
        let map = |q: QubitId| {
            for &(start, width, self_start) in &offsets {
                if q.0 >= start && q.0 < start + width {
                    return QubitId(self_start + (q.0 - start));
                }
            }
            q // unreachable for valid circuits
        };
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().map(|g| g.remapped(&map)));
        let out = Circuit { layout, gates };
        out.validate()?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::Gate;

    fn q(i: u32) -> QubitId {
        QubitId(i)
    }

    #[test]
    fn append_to_empty() {
        let c = Circuit::bare(3);
        let c = c.append(Gate::toffoli(q(0), q(1), q(2))).unwrap();
        assert_eq!(c.gates.len(), 1);
    }

    #[test]
    fn append_rejects_duplicate_operand() {
        let c = Circuit::bare(3);
        let err = c.append(Gate::toffoli(q(0), q(0), q(2))).unwrap_err();
        assert!(matches!(err, CircuitError::DuplicateOperand { .. }));
    }

    #[test]
    fn append_rejects_out_of_range() {
        let c = Circuit::bare(3);
        let err = c.append(Gate::cnot(q(5), q(1))).unwrap_err();
        assert!(matches!(err, CircuitError::OutOfRange { .. }));
    }

    #[test]
    fn inverse_reverses_and_swaps_and_kinds() {
        let mut c = Circuit::bare(3);
        c.push(Gate::cnot(q(0), q(1))).unwrap();
        c.push(Gate::toffoli(q(0), q(1), q(2))).unwrap();
        let inv = c.inverse();
        assert_eq!(inv.gates[0], Gate::toffoli(q(0), q(1), q(2)));
        assert_eq!(inv.gates[1], Gate::cnot(q(0), q(1)));

        let mut d = Circuit::bare(3);
        d.push(Gate::and_compute(q(0), q(1), q(2))).unwrap();
        assert_eq!(d.inverse().gates[0], Gate::and_uncompute(q(0), q(1), q(2)));
    }

    #[test]
    fn inverse_is_involution() {
        let mut c = Circuit::bare(4);
        c.push(Gate::x(q(3))).unwrap();
        c.push(Gate::and_compute(q(0), q(1), q(2))).unwrap();
        c.push(Gate::cnot(q(2), q(3))).unwrap();
        c.push(Gate::and_uncompute(q(0), q(1), q(2))).unwrap();
        assert_eq!(c.inverse().inverse(), c);
    }

    #[test]
    fn compose_width_mismatch() {
        let mut a = RegisterLayout::new();
        a.push("x", RegisterRole::Scratch, 4);
        let a = Circuit::new(a);
        let mut b = RegisterLayout::new();
        b.push("y", RegisterRole::Scratch, 3);
        let b = Circuit::new(b);
        let err = a.compose(&b, &[("y", "x")]).unwrap_err();
        assert!(matches!(err, CircuitError::WidthMismatch { .. }));
    }

    #[test]
    fn compose_with_empty_is_identity_up_to_renumbering() {
        let mut c = Circuit::bare(2);
        c.push(Gate::cnot(q(0), q(1))).unwrap();
        let empty = Circuit::new(RegisterLayout::new());
        let composed = empty.compose(&c, &[]).unwrap();
        assert_eq!(composed.gates, c.gates);
        assert_eq!(composed.qubit_count(), 2);
    }

    #[test]
    fn and_discipline_flags_retarget() {
        let mut c = Circuit::bare(3);
        c.push(Gate::and_compute(q(0), q(1), q(2))).unwrap();
        c.push(Gate::x(q(2))).unwrap();
        let err = c.validate().unwrap_err();
        assert!(matches!(err, CircuitError::AndDiscipline { index: 1, .. }));
    }
}
