//! Dense state-vector evolution: exact, product formula, and compiled circuit.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ion::Circuit;
use crate::linalg::{inner, norm_sqr, HermitianEigen};
use crate::pauli::{PauliString, PauliSum};
use crate::trotter::TrotterPlan;

/// Allowed drift of the squared norm away from one.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Hermiticity residue accepted before eigensolving.
pub const EIGEN_HERMITICITY_TOLERANCE: f64 = 1e-10;

/// Amplitudes over the little-endian computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize, limit: usize) -> Result<Self> {
        if n_qubits > limit {
            return Err(Error::RegisterTooLarge { n_qubits, limit });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                what: "basis index",
                index,
                max: dim - 1,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps amplitudes, which must have length `2^n` and unit norm.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1usize << n_qubits {
            return Err(Error::Precondition(format!(
                "{} amplitudes for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        let s = Self {
            n_qubits,
            amplitudes,
        };
        s.check_norm()?;
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn check_norm(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Numerical(format!("state norm drifted to {n}")));
        }
        Ok(())
    }

    fn same_register(&self, other: &StateVector) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::RegisterMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    /// Applies `exp(-i angle P)` as `cos(angle) psi - i sin(angle) P psi`.
    pub fn apply_pauli_exponential(&mut self, p: &PauliString, angle: f64, scratch: &mut Vec<Complex64>) {
        scratch.resize(self.amplitudes.len(), Complex64::new(0.0, 0.0));
        p.apply_into(&self.amplitudes, scratch);
        let (s, c) = angle.sin_cos();
        let mis = Complex64::new(0.0, -s);
        for (a, pa) in self.amplitudes.iter_mut().zip(scratch.iter()) {
            *a = *a * c + mis * pa;
        }
    }

    /// `<psi|H|psi>`, real part.
    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        if h.n_qubits() != self.n_qubits {
            return Err(Error::RegisterMismatch {
                left: h.n_qubits(),
                right: self.n_qubits,
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for t in h.terms() {
            t.string.apply_into(&self.amplitudes, &mut scratch);
            acc += t.coefficient * inner(&self.amplitudes, &scratch);
        }
        Ok(acc.re)
    }
}

/// Basis state with the given modes occupied. The ordered product of
/// creation operators only adds a global sign on a basis state.
pub fn prepare_occupation_state(occupied: &[usize], n_qubits: usize, limit: usize) -> Result<StateVector> {
    let mut index = 0usize;
    for &m in occupied {
        if m == 0 || m > n_qubits {
            return Err(Error::IndexOutOfRange {
                what: "occupied mode",
                index: m,
                max: n_qubits,
            });
        }
        index |= 1 << (m - 1);
    }
    StateVector::basis(n_qubits, index, limit)
}

/// `<(I - Z_mode)/2>`: probability that the mode's bit is set.
pub fn occupation(psi: &StateVector, mode: usize) -> Result<f64> {
    if mode == 0 || mode > psi.n_qubits {
        return Err(Error::IndexOutOfRange {
            what: "mode",
            index: mode,
            max: psi.n_qubits,
        });
    }
    let bit = 1usize << (mode - 1);
    Ok(psi
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(b, _)| b & bit != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum())
}

/// Sum of occupations over modes `1..=n_modes`.
pub fn particle_number(psi: &StateVector, n_modes: usize) -> Result<f64> {
    (1..=n_modes).map(|m| occupation(psi, m)).sum()
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    a.same_register(b)?;
    Ok(inner(&a.amplitudes, &b.amplitudes).norm_sqr().min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    TrotterMatrix,
    TrotterCircuit,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::TrotterMatrix => "trotter-matrix",
            Method::TrotterCircuit => "trotter-circuit",
        }
    }
}

/// Recorded observables along a trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct EvolutionResult {
    pub method: Method,
    pub times: Vec<f64>,
    /// Modes whose occupation is recorded.
    pub modes: Vec<usize>,
    /// `occupations[i][k]`: occupation of `modes[i]` at `times[k]`.
    pub occupations: Vec<Vec<f64>>,
    pub fidelity_vs_exact: Option<Vec<f64>>,
    #[serde(skip)]
    pub states: Vec<StateVector>,
}

impl EvolutionResult {
    fn new(method: Method, modes: &[usize]) -> Self {
        Self {
            method,
            times: Vec::new(),
            modes: modes.to_vec(),
            occupations: vec![Vec::new(); modes.len()],
            fidelity_vs_exact: None,
            states: Vec::new(),
        }
    }

    fn record(&mut self, t: f64, psi: &StateVector) -> Result<()> {
        psi.check_norm()?;
        self.times.push(t);
        for (series, &m) in self.occupations.iter_mut().zip(&self.modes) {
            series.push(occupation(psi, m)?);
        }
        self.states.push(psi.clone());
        Ok(())
    }

    pub fn final_state(&self) -> Option<&StateVector> {
        self.states.last()
    }

    /// Fills `fidelity_vs_exact` by evolving `psi0` exactly to every
    /// recorded time.
    pub fn compare_with_exact(&mut self, exact: &ExactEvolver, psi0: &StateVector) -> Result<()> {
        let mut f = Vec::with_capacity(self.times.len());
        for (t, s) in self.times.iter().zip(&self.states) {
            f.push(fidelity(&exact.state_at(psi0, *t)?, s)?);
        }
        self.fidelity_vs_exact = Some(f);
        Ok(())
    }
}

/// Eigendecomposition of a Hamiltonian, reusable across times.
#[derive(Debug, Clone)]
pub struct ExactEvolver {
    n_qubits: usize,
    eig: HermitianEigen,
}

impl ExactEvolver {
    pub fn new(h: &PauliSum, limit: usize) -> Result<Self> {
        let m = h.to_matrix(limit)?;
        let eig = HermitianEigen::new(&m, EIGEN_HERMITICITY_TOLERANCE)?;
        Ok(Self {
            n_qubits: h.n_qubits(),
            eig,
        })
    }

    /// `V exp(-i Lambda t) V^dagger psi0`.
    pub fn state_at(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        if psi0.n_qubits != self.n_qubits {
            return Err(Error::RegisterMismatch {
                left: self.n_qubits,
                right: psi0.n_qubits,
            });
        }
        let s = StateVector {
            n_qubits: self.n_qubits,
            amplitudes: self.eig.evolve(&psi0.amplitudes, t),
        };
        s.check_norm()?;
        Ok(s)
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.eig.values.as_slice()
    }
}

/// Exact evolution sampled on `times`.
pub fn evolve_exact(
    h: &PauliSum,
    psi0: &StateVector,
    times: &[f64],
    modes: &[usize],
    limit: usize,
) -> Result<EvolutionResult> {
    let ev = ExactEvolver::new(h, limit)?;
    let mut r = EvolutionResult::new(Method::Exact, modes);
    for &t in times {
        r.record(t, &ev.state_at(psi0, t)?)?;
    }
    Ok(r)
}

/// Uniform grid of `n` points on `[0, t]`.
pub fn uniform_grid(t: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t],
        _ => (0..n).map(|k| t * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Product-formula evolution applied slice by slice. With
/// `record_each_step` the state is recorded at `t = 0` and after every
/// step; otherwise only the final state is recorded.
pub fn evolve_trotter(
    plan: &TrotterPlan,
    h: &PauliSum,
    psi0: &StateVector,
    record_each_step: bool,
    modes: &[usize],
) -> Result<EvolutionResult> {
    plan.check_against(h)?;
    if psi0.n_qubits != h.n_qubits() {
        return Err(Error::RegisterMismatch {
            left: h.n_qubits(),
            right: psi0.n_qubits,
        });
    }
    let strings: Vec<PauliString> = h.terms().map(|t| t.string).collect();
    let tau = plan.t_total / plan.n_steps as f64;
    let mut r = EvolutionResult::new(Method::TrotterMatrix, modes);
    let mut psi = psi0.clone();
    let mut scratch = Vec::new();
    if record_each_step {
        r.record(0.0, &psi)?;
    }
    for k in 0..plan.n_steps {
        for s in plan.step(k) {
            psi.apply_pauli_exponential(&strings[s.term], s.angle, &mut scratch);
        }
        if record_each_step || k + 1 == plan.n_steps {
            // identity strings only contribute a global phase
            let mut out = psi.clone();
            let ph = Complex64::from_polar(1.0, -plan.identity_angle * (k + 1) as f64 / plan.n_steps as f64);
            out.amplitudes.iter_mut().for_each(|a| *a *= ph);
            r.record(tau * (k + 1) as f64, &out)?;
        }
    }
    Ok(r)
}

/// Applies a circuit to a state.
pub fn evolve_circuit(c: &Circuit, psi0: &StateVector) -> Result<StateVector> {
    if c.n_qubits != psi0.n_qubits {
        return Err(Error::RegisterMismatch {
            left: c.n_qubits,
            right: psi0.n_qubits,
        });
    }
    let mut psi = psi0.clone();
    c.apply(&mut psi.amplitudes)?;
    psi.check_norm()?;
    Ok(psi)
}

/// Repeats a one-step circuit `n_steps` times, recording after each step.
pub fn evolve_circuit_steps(
    step: &Circuit,
    n_steps: usize,
    tau: f64,
    psi0: &StateVector,
    modes: &[usize],
) -> Result<EvolutionResult> {
    let mut r = EvolutionResult::new(Method::TrotterCircuit, modes);
    let mut psi = psi0.clone();
    r.record(0.0, &psi)?;
    for k in 0..n_steps {
        psi = evolve_circuit(step, &psi)?;
        r.record(tau * (k + 1) as f64, &psi)?;
    }
    Ok(r)
}
