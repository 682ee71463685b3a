//! Product-formula schedules for `exp(-iHt)` with `H` a real Pauli sum, and
//! the resource bounds that go with them.
//!
//! First order repeats `prod_j exp(-i c_j P_j t/n)` `n` times. Second order
//! uses the symmetric step `A(tau/2) ... Y(tau/2) Z(tau) Y(tau/2) ... A(tau/2)`.
//! Identity strings never become slices; their contribution is kept as a
//! global phase angle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jw::HERMITICITY_TOLERANCE;
use crate::linalg::HermitianEigen;
use crate::pauli::PauliSum;

/// One exponential `exp(-i angle P_term)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slice {
    /// Index into the canonical term order of the planned Hamiltonian.
    pub term: usize,
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrotterPlan {
    pub order: u8,
    pub n_steps: usize,
    pub t_total: f64,
    pub n_qubits: usize,
    /// Number of terms in the Hamiltonian the plan was built for.
    pub n_terms: usize,
    /// `c_I * t_total`; the evolved state picks up `exp(-i identity_angle)`.
    pub identity_angle: f64,
    pub slices_per_step: usize,
    pub slices: Vec<Slice>,
}

impl TrotterPlan {
    /// Slices belonging to step `k` (0-based).
    pub fn step(&self, k: usize) -> &[Slice] {
        let s = self.slices_per_step;
        &self.slices[k * s..(k + 1) * s]
    }

    /// Checks the plan was built for `h`.
    pub fn check_against(&self, h: &PauliSum) -> Result<()> {
        if h.n_qubits() != self.n_qubits {
            return Err(Error::PlanMismatch(format!(
                "plan is for {} qubits, Hamiltonian has {}",
                self.n_qubits,
                h.n_qubits()
            )));
        }
        if h.len() != self.n_terms {
            return Err(Error::PlanMismatch(format!(
                "plan is for {} terms, Hamiltonian has {}",
                self.n_terms,
                h.len()
            )));
        }
        Ok(())
    }

    /// Serializable view with each slice's Pauli string spelled out.
    pub fn to_json(&self, h: &PauliSum) -> Result<serde_json::Value> {
        self.check_against(h)?;
        let terms: Vec<_> = h.terms().collect();
        let slices: Vec<_> = self
            .slices
            .iter()
            .map(|s| {
                serde_json::json!({
                    "term": s.term,
                    "string": terms[s.term].string.to_letters(),
                    "angle": s.angle,
                })
            })
            .collect();
        Ok(serde_json::json!({
            "order": self.order,
            "n_steps": self.n_steps,
            "t_total": self.t_total,
            "n_qubits": self.n_qubits,
            "identity_angle": self.identity_angle,
            "slices_per_step": self.slices_per_step,
            "slices": slices,
        }))
    }
}

/// Builds a plan over the canonical term order.
pub fn make_plan(h: &PauliSum, t: f64, n_steps: usize, order: u8) -> Result<TrotterPlan> {
    let perm: Vec<usize> = (0..h.len()).collect();
    make_plan_ordered(h, t, n_steps, order, &perm)
}

/// Builds a plan visiting terms in the order given by `term_order`, a
/// permutation of `0..h.len()`. Used for ordering-sensitivity diagnostics.
pub fn make_plan_ordered(
    h: &PauliSum,
    t: f64,
    n_steps: usize,
    order: u8,
    term_order: &[usize],
) -> Result<TrotterPlan> {
    if n_steps == 0 {
        return Err(Error::Precondition("n_steps must be at least 1".into()));
    }
    if order != 1 && order != 2 {
        return Err(Error::Precondition(format!(
            "product-formula order must be 1 or 2, got {order}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::Precondition("evolution time must be finite".into()));
    }
    let residue = h.imaginary_residue();
    if residue > HERMITICITY_TOLERANCE {
        return Err(Error::NotHermitian {
            residue,
            tolerance: HERMITICITY_TOLERANCE,
        });
    }
    let mut seen = vec![false; h.len()];
    for &i in term_order {
        if i >= h.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::Precondition(
                "term order is not a permutation of the Hamiltonian terms".into(),
            ));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Precondition(
            "term order is not a permutation of the Hamiltonian terms".into(),
        ));
    }

    let terms: Vec<_> = h.terms().collect();
    let tau = t / n_steps as f64;
    let mut identity_angle = 0.0;
    let mut active = Vec::new();
    for &i in term_order {
        let term = &terms[i];
        if term.string.is_identity() {
            identity_angle += term.coefficient.re * t;
        } else {
            active.push((i, term.coefficient.re));
        }
    }

    let step: Vec<Slice> = match order {
        1 => active
            .iter()
            .map(|&(term, c)| Slice {
                term,
                angle: c * tau,
            })
            .collect(),
        _ => match active.split_last() {
            None => Vec::new(),
            Some((&(last, c_last), rest)) => {
                let mut v: Vec<Slice> = rest
                    .iter()
                    .map(|&(term, c)| Slice {
                        term,
                        angle: c * tau / 2.0,
                    })
                    .collect();
                v.push(Slice {
                    term: last,
                    angle: c_last * tau,
                });
                v.extend(rest.iter().rev().map(|&(term, c)| Slice {
                    term,
                    angle: c * tau / 2.0,
                }));
                v
            }
        },
    };

    let slices_per_step = step.len();
    let mut slices = Vec::with_capacity(slices_per_step * n_steps);
    for _ in 0..n_steps {
        slices.extend_from_slice(&step);
    }
    Ok(TrotterPlan {
        order,
        n_steps,
        t_total: t,
        n_qubits: h.n_qubits(),
        n_terms: h.len(),
        identity_angle,
        slices_per_step,
        slices,
    })
}

/// Inputs to the exponential-count bound for a `k`-th order
/// Lie-Trotter-Suzuki integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundQuery {
    /// Number of Hamiltonian summands.
    pub m: usize,
    /// Upper bound on the operator norm of `H`.
    pub h_norm: f64,
    pub t: f64,
    pub epsilon: f64,
    pub k: u32,
}

impl BoundQuery {
    /// `2 m 5^{k-1} ||H|| t`, the right end of the validity chain.
    pub fn validity_product(&self) -> f64 {
        2.0 * self.m as f64 * 5f64.powi(self.k as i32 - 1) * self.h_norm * self.t
    }

    /// Checks `epsilon <= 1 <= 2 m 5^{k-1} ||H|| t` and basic positivity.
    pub fn check(&self) -> Result<()> {
        if self.m == 0 || self.k == 0 {
            return Err(Error::Precondition("m and k must be positive".into()));
        }
        // written negated so NaN is rejected too
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.epsilon > 0.0) {
            return Err(Error::Precondition(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.h_norm >= 0.0 && self.t >= 0.0) {
            return Err(Error::Precondition(
                "norm bound and time must be non-negative".into(),
            ));
        }
        if self.epsilon > 1.0 {
            return Err(Error::Precondition(format!(
                "epsilon <= 1 violated (epsilon = {})",
                self.epsilon
            )));
        }
        let p = self.validity_product();
        if p < 1.0 {
            return Err(Error::Precondition(format!(
                "1 <= 2 m 5^(k-1) ||H|| t violated (value = {p})"
            )));
        }
        Ok(())
    }
}

/// `N_e <= m 5^{2k} (m ||H|| t)^{1 + 1/2k} / epsilon^{1/2k}`.
pub fn gate_count_bound(q: &BoundQuery) -> Result<f64> {
    q.check()?;
    let m = q.m as f64;
    let inv = 1.0 / (2.0 * q.k as f64);
    Ok(m * 5f64.powi(2 * q.k as i32) * (m * q.h_norm * q.t).powf(1.0 + inv) / q.epsilon.powf(inv))
}

/// Triangle-inequality bound `sum |c_j|` on the operator norm.
pub fn norm_bound(h: &PauliSum) -> f64 {
    h.terms().map(|t| t.coefficient.norm()).sum()
}

/// Exact operator 2-norm by dense eigensolve.
pub fn exact_norm(h: &PauliSum, limit: usize) -> Result<f64> {
    let m = h.to_matrix(limit)?;
    Ok(HermitianEigen::new(&m, 1e-10)?.spectral_norm())
}

/// Dense limit for [`exact_norm`] checks.
pub const EXACT_NORM_LIMIT: usize = 12;
