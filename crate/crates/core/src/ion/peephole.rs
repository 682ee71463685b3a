//! Gate-sharing pass.
//!
//! Each incoming gate looks back through gates on disjoint qubits for a gate
//! of the same kind, axis, targets and role. Matching gates are fused by
//! adding angles, and a fused gate with zero angle disappears. Because
//! removal happens while scanning, the post-rotations and closing MS of one
//! slice cancel against the opening gates of an identical following slice.

use num_complex::Complex64;

use super::circuit::{Circuit, Instruction};
use super::gate::Gate;

/// Fused angles below this are dropped.
pub const CANCEL_TOLERANCE: f64 = 1e-12;

const PHI_TOLERANCE: f64 = 1e-12;

fn disjoint(a: &Gate, b: &Gate) -> bool {
    let sa = a.support();
    b.support().iter().all(|q| !sa.contains(q))
}

/// Fuses `b` into `a` when both are rotations of the same family.
fn fuse(a: &Instruction, b: &Instruction) -> Option<Gate> {
    if a.role != b.role {
        return None;
    }
    match (&a.gate, &b.gate) {
        (
            Gate::Ms {
                theta: t1,
                phi: p1,
                targets: q1,
            },
            Gate::Ms {
                theta: t2,
                phi: p2,
                targets: q2,
            },
        ) if q1 == q2 && (p1 - p2).abs() < PHI_TOLERANCE => Some(Gate::Ms {
            theta: t1 + t2,
            phi: *p1,
            targets: q1.clone(),
        }),
        (
            Gate::CollectiveRot {
                axis: a1,
                angle: x1,
                targets: q1,
            },
            Gate::CollectiveRot {
                axis: a2,
                angle: x2,
                targets: q2,
            },
        ) if a1 == a2 && q1 == q2 => Some(Gate::CollectiveRot {
            axis: *a1,
            angle: x1 + x2,
            targets: q1.clone(),
        }),
        (
            Gate::LocalRot {
                axis: a1,
                angle: x1,
                qubit: q1,
            },
            Gate::LocalRot {
                axis: a2,
                angle: x2,
                qubit: q2,
            },
        ) if a1 == a2 && q1 == q2 => Some(Gate::LocalRot {
            axis: *a1,
            angle: x1 + x2,
            qubit: *q1,
        }),
        _ => None,
    }
}

fn angle(g: &Gate) -> f64 {
    match g {
        Gate::Ms { theta, .. } => *theta,
        Gate::CollectiveRot { angle, .. } | Gate::LocalRot { angle, .. } => *angle,
    }
}

/// Returns an equivalent circuit with adjacent compatible gates fused.
pub fn share_gates(c: &Circuit) -> Circuit {
    let mut out: Vec<Instruction> = Vec::with_capacity(c.gates.len());
    let mut phase: Complex64 = c.phase;
    for ins in &c.gates {
        let mut placed = false;
        for j in (0..out.len()).rev() {
            if let Some(fused) = fuse(&out[j], ins) {
                let (g, factor) = fused.normalized();
                phase *= factor;
                if angle(&g).abs() < CANCEL_TOLERANCE {
                    out.remove(j);
                } else {
                    out[j].gate = g;
                }
                placed = true;
                break;
            }
            if !disjoint(&out[j].gate, &ins.gate) {
                break;
            }
        }
        if !placed {
            out.push(ins.clone());
        }
    }
    Circuit {
        n_qubits: c.n_qubits,
        gates: out,
        phase,
    }
}
