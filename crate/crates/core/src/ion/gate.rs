//! Trapped-ion gate set and its action on dense states.
//!
//! Conventions (all angles in radians):
//! - `Ms { theta, phi }` is `exp[-i theta (cos(phi) S_x + sin(phi) S_y)^2 / 4]`
//!   with `S_a` the sum of `sigma^a` over the targets.
//! - `CollectiveRot { axis, angle }` is `exp[i angle sum_q sigma^axis_q]`.
//! - `LocalRot { axis, angle, qubit }` is `exp[i angle sigma^axis_qubit]`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::Letter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotAxis {
    X,
    Y,
    Z,
}

impl RotAxis {
    pub fn letter(self) -> Letter {
        match self {
            RotAxis::X => Letter::X,
            RotAxis::Y => Letter::Y,
            RotAxis::Z => Letter::Z,
        }
    }

    pub fn from_letter(l: Letter) -> Option<Self> {
        match l {
            Letter::X => Some(RotAxis::X),
            Letter::Y => Some(RotAxis::Y),
            Letter::Z => Some(RotAxis::Z),
            Letter::I => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Ms {
        theta: f64,
        phi: f64,
        targets: Vec<usize>,
    },
    CollectiveRot {
        axis: RotAxis,
        angle: f64,
        targets: Vec<usize>,
    },
    LocalRot {
        axis: RotAxis,
        angle: f64,
        qubit: usize,
    },
}

/// Wraps `a` into `(-pi, pi]`, returning the number of `2 pi` turns removed.
pub(crate) fn wrap_angle(a: f64) -> (f64, i64) {
    let turns = ((a + PI) / (2.0 * PI)).ceil() - 1.0;
    let mut w = a - 2.0 * PI * turns;
    let mut turns = turns as i64;
    if w <= -PI {
        w += 2.0 * PI;
        turns -= 1;
    }
    if w > PI {
        w -= 2.0 * PI;
        turns += 1;
    }
    (w, turns)
}

impl Gate {
    /// 1-based qubits touched by the gate, ascending.
    pub fn support(&self) -> Vec<usize> {
        match self {
            Gate::Ms { targets, .. } | Gate::CollectiveRot { targets, .. } => targets.clone(),
            Gate::LocalRot { qubit, .. } => vec![*qubit],
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let support = self.support();
        for w in support.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Precondition(
                    "gate targets must be strictly ascending".into(),
                ));
            }
        }
        for &q in &support {
            if q == 0 || q > n_qubits {
                return Err(Error::IndexOutOfRange {
                    what: "gate target",
                    index: q,
                    max: n_qubits,
                });
            }
        }
        match self {
            Gate::Ms { targets, .. } if targets.len() < 2 => Err(Error::Precondition(
                "MS gate needs at least two targets".into(),
            )),
            Gate::CollectiveRot { axis: RotAxis::Z, .. } => Err(Error::Precondition(
                "collective rotations are about x or y".into(),
            )),
            Gate::CollectiveRot { targets, .. } if targets.is_empty() => Err(
                Error::Precondition("collective rotation without targets".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Returns the gate with its angle wrapped into `(-pi, pi]` and the
    /// scalar `c` such that `original = c * wrapped`.
    pub fn normalized(&self) -> (Gate, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Gate::Ms {
                theta,
                phi,
                targets,
            } => {
                let (t, turns) = wrap_angle(*theta);
                // MS(theta + 2 pi) = MS(theta) for even target count and
                // -i MS(theta) for odd, since m^2 = 1 mod 8 for odd m.
                let c = if targets.len() % 2 == 0 {
                    one
                } else {
                    Complex64::new(0.0, -1.0).powi((turns.rem_euclid(4)) as i32)
                };
                let (p, _) = wrap_angle(*phi);
                (
                    Gate::Ms {
                        theta: t,
                        phi: p,
                        targets: targets.clone(),
                    },
                    c,
                )
            }
            Gate::CollectiveRot {
                axis,
                angle,
                targets,
            } => (
                Gate::CollectiveRot {
                    axis: *axis,
                    angle: wrap_angle(*angle).0,
                    targets: targets.clone(),
                },
                one,
            ),
            Gate::LocalRot { axis, angle, qubit } => (
                Gate::LocalRot {
                    axis: *axis,
                    angle: wrap_angle(*angle).0,
                    qubit: *qubit,
                },
                one,
            ),
        }
    }

    /// Applies the gate in place to a little-endian state vector.
    pub fn apply(&self, state: &mut [Complex64]) {
        match self {
            Gate::LocalRot { axis, angle, qubit } => {
                apply_1q(state, *qubit, &rotation_matrix(*axis, *angle))
            }
            Gate::CollectiveRot {
                axis,
                angle,
                targets,
            } => {
                let m = rotation_matrix(*axis, *angle);
                for &q in targets {
                    apply_1q(state, q, &m);
                }
            }
            Gate::Ms {
                theta,
                phi,
                targets,
            } => apply_ms(state, *theta, *phi, targets),
        }
    }

    /// Dense matrix on an `n_qubits` register.
    pub fn matrix(&self, n_qubits: usize, limit: usize) -> Result<CMatrix> {
        if n_qubits > limit {
            return Err(Error::RegisterTooLarge { n_qubits, limit });
        }
        self.validate(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        for j in 0..dim {
            col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
            col[j] = Complex64::new(1.0, 0.0);
            self.apply(&mut col);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Ok(m)
    }
}

/// `exp(i angle sigma^axis)`.
fn rotation_matrix(axis: RotAxis, angle: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = angle.sin_cos();
    let z = Complex64::new(0.0, 0.0);
    match axis {
        RotAxis::X => [
            [Complex64::new(c, 0.0), Complex64::new(0.0, s)],
            [Complex64::new(0.0, s), Complex64::new(c, 0.0)],
        ],
        RotAxis::Y => [
            [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
            [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
        ],
        RotAxis::Z => [
            [Complex64::new(c, s), z],
            [z, Complex64::new(c, -s)],
        ],
    }
}

fn apply_1q(state: &mut [Complex64], qubit: usize, m: &[[Complex64; 2]; 2]) {
    let bit = 1usize << (qubit - 1);
    for b in 0..state.len() {
        if b & bit == 0 {
            let a0 = state[b];
            let a1 = state[b | bit];
            state[b] = m[0][0] * a0 + m[0][1] * a1;
            state[b | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

/// Rotates every target into the eigenbasis of `cos(phi) X + sin(phi) Y`,
/// applies the diagonal `exp(-i theta m^2 / 4)` with `m` the collective
/// eigenvalue, and rotates back.
fn apply_ms(state: &mut [Complex64], theta: f64, phi: f64, targets: &[usize]) {
    let e = Complex64::from_polar(1.0, phi);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    // columns are the +1 and -1 eigenvectors (1, e^{i phi})/sqrt2, (1, -e^{i phi})/sqrt2
    let r = [[h, h], [h * e, -h * e]];
    let r_dag = [
        [r[0][0].conj(), r[1][0].conj()],
        [r[0][1].conj(), r[1][1].conj()],
    ];
    for &q in targets {
        apply_1q(state, q, &r_dag);
    }
    let tmask: usize = targets.iter().map(|q| 1usize << (q - 1)).sum();
    let k = targets.len() as i64;
    for (b, amp) in state.iter_mut().enumerate() {
        let ones = (b & tmask).count_ones() as i64;
        let m = (k - 2 * ones) as f64;
        *amp *= Complex64::from_polar(1.0, -theta * m * m / 4.0);
    }
    for &q in targets {
        apply_1q(state, q, &r);
    }
}

/// Dense unitary of an MS gate.
pub fn ms_unitary(theta: f64, phi: f64, targets: &[usize], n_qubits: usize, limit: usize) -> Result<CMatrix> {
    Gate::Ms {
        theta,
        phi,
        targets: targets.to_vec(),
    }
    .matrix(n_qubits, limit)
}
