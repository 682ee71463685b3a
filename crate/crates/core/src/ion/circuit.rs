use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gate::{Gate, RotAxis};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Why a gate is in the circuit. Drives the gate-count columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateRole {
    /// MS gates and the rotation sandwiched between them.
    Core,
    /// Rotations mapping the natural MS pattern onto the target string.
    BasisChange,
    /// Exponential of a weight-one string. Reported in the local layer.
    SingleQubitTerm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub gate: Gate,
    pub role: GateRole,
}

/// Gate totals under the counting convention: MS, collective rotations and
/// the sandwiched local rotation count; weight-one exponentials form a
/// separate local layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GateCounts {
    pub counted: usize,
    pub local_layer: usize,
    pub total_raw: usize,
    pub ms: usize,
}

/// Ordered gate list; the first gate is applied first. The circuit's
/// operator is `phase * G_last ... G_first`.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Instruction>,
    pub phase: Complex64,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            phase: Complex64::new(1.0, 0.0),
        }
    }

    /// Validates, wraps the angle into `(-pi, pi]` and appends. Any scalar
    /// split off by the wrap goes into `phase`.
    pub fn push(&mut self, gate: Gate, role: GateRole) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let (gate, c) = gate.normalized();
        self.phase *= c;
        self.gates.push(Instruction { gate, role });
        Ok(())
    }

    /// Appends `other` after `self`.
    pub fn append(&mut self, other: Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::RegisterMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        self.gates.extend(other.gates);
        self.phase *= other.phase;
        Ok(())
    }

    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts {
            total_raw: self.gates.len(),
            ..Default::default()
        };
        for ins in &self.gates {
            match ins.role {
                GateRole::SingleQubitTerm => c.local_layer += 1,
                _ => c.counted += 1,
            }
            if matches!(ins.gate, Gate::Ms { .. }) {
                c.ms += 1;
            }
        }
        c
    }

    pub fn counted_gates(&self) -> usize {
        self.counts().counted
    }

    /// Applies every gate and the phase to a state in place.
    pub fn apply(&self, state: &mut [Complex64]) -> Result<()> {
        if state.len() != 1usize << self.n_qubits {
            return Err(Error::Precondition(format!(
                "state of length {} on a {}-qubit circuit",
                state.len(),
                self.n_qubits
            )));
        }
        for ins in &self.gates {
            ins.gate.apply(state);
        }
        for a in state.iter_mut() {
            *a *= self.phase;
        }
        Ok(())
    }

    /// Dense unitary, built column by column.
    pub fn unitary(&self, limit: usize) -> Result<CMatrix> {
        if self.n_qubits > limit {
            return Err(Error::RegisterTooLarge {
                n_qubits: self.n_qubits,
                limit,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        for j in 0..dim {
            col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
            col[j] = Complex64::new(1.0, 0.0);
            self.apply(&mut col)?;
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Ok(m)
    }

    pub fn records(&self) -> Vec<GateRecord> {
        self.gates.iter().map(GateRecord::from).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n_qubits": self.n_qubits,
            "phase": [self.phase.re, self.phase.im],
            "counts": self.counts(),
            "gates": self.records(),
        })
    }
}

/// Flat serialized form of one gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: GateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<RotAxis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    pub targets: Vec<usize>,
    pub role: GateRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Ms,
    CollectiveRot,
    LocalRot,
}

impl From<&Instruction> for GateRecord {
    fn from(ins: &Instruction) -> Self {
        let blank = GateRecord {
            kind: GateKind::Ms,
            theta: None,
            phi: None,
            axis: None,
            angle: None,
            targets: ins.gate.support(),
            role: ins.role,
        };
        match &ins.gate {
            Gate::Ms { theta, phi, .. } => GateRecord {
                theta: Some(*theta),
                phi: Some(*phi),
                ..blank
            },
            Gate::CollectiveRot { axis, angle, .. } => GateRecord {
                kind: GateKind::CollectiveRot,
                axis: Some(*axis),
                angle: Some(*angle),
                ..blank
            },
            Gate::LocalRot { axis, angle, .. } => GateRecord {
                kind: GateKind::LocalRot,
                axis: Some(*axis),
                angle: Some(*angle),
                ..blank
            },
        }
    }
}

impl TryFrom<GateRecord> for Instruction {
    type Error = Error;

    fn try_from(r: GateRecord) -> Result<Self> {
        let missing = |f: &str| Error::Parse(format!("{:?} record without {f}", r.kind));
        let gate = match r.kind {
            GateKind::Ms => Gate::Ms {
                theta: r.theta.ok_or_else(|| missing("theta"))?,
                phi: r.phi.ok_or_else(|| missing("phi"))?,
                targets: r.targets.clone(),
            },
            GateKind::CollectiveRot => Gate::CollectiveRot {
                axis: r.axis.ok_or_else(|| missing("axis"))?,
                angle: r.angle.ok_or_else(|| missing("angle"))?,
                targets: r.targets.clone(),
            },
            GateKind::LocalRot => {
                if r.targets.len() != 1 {
                    return Err(Error::Parse("local rotation needs exactly one target".into()));
                }
                Gate::LocalRot {
                    axis: r.axis.ok_or_else(|| missing("axis"))?,
                    angle: r.angle.ok_or_else(|| missing("angle"))?,
                    qubit: r.targets[0],
                }
            }
        };
        Ok(Instruction { gate, role: r.role })
    }
}

/// Dense unitary of a circuit.
pub fn circuit_unitary(c: &Circuit, limit: usize) -> Result<CMatrix> {
    c.unitary(limit)
}
