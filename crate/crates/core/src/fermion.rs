//! Second-quantized Hamiltonians: products of creation/annihilation
//! operators, optionally multiplied by impurity-spin factors.
//!
//! Operator products are stored exactly as written (leftmost factor applied
//! last); nothing is normal ordered behind the caller's back.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jw::JordanWigner;

/// Coupling tolerance used when deciding whether an adjoint is already
/// present.
pub const CLOSURE_TOLERANCE: f64 = 1e-12;

/// `b_mode` or `b_mode^dagger`, modes are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FermionOp {
    pub mode: usize,
    pub dagger: bool,
}

impl FermionOp {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self { mode, dagger: false }
    }

    pub fn adjoint(self) -> Self {
        Self {
            mode: self.mode,
            dagger: !self.dagger,
        }
    }
}

impl fmt::Display for FermionOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dagger {
            write!(f, "b+{}", self.mode)
        } else {
            write!(f, "b{}", self.mode)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinOp {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

impl SpinOp {
    pub fn adjoint(self) -> Self {
        match self {
            SpinOp::Plus => SpinOp::Minus,
            SpinOp::Minus => SpinOp::Plus,
            other => other,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SpinOp::X => "x",
            SpinOp::Y => "y",
            SpinOp::Z => "z",
            SpinOp::Plus => "+",
            SpinOp::Minus => "-",
        }
    }

    pub fn from_symbol(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(SpinOp::X),
            "y" | "Y" => Ok(SpinOp::Y),
            "z" | "Z" => Ok(SpinOp::Z),
            "+" => Ok(SpinOp::Plus),
            "-" | "\u{2212}" => Ok(SpinOp::Minus),
            other => Err(Error::Parse(format!("unknown spin operator {other:?}"))),
        }
    }
}

/// Pauli-type operator on impurity qubit `impurity` (1-based within the
/// impurity register).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinFactor {
    pub impurity: usize,
    pub op: SpinOp,
}

impl SpinFactor {
    pub fn new(impurity: usize, op: SpinOp) -> Self {
        Self { impurity, op }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermionTerm {
    pub coupling: Complex64,
    pub ops: Vec<FermionOp>,
    pub spins: Vec<SpinFactor>,
}

impl FermionTerm {
    pub fn new(coupling: Complex64, ops: Vec<FermionOp>) -> Self {
        Self {
            coupling,
            ops,
            spins: Vec::new(),
        }
    }

    pub fn with_spins(mut self, spins: Vec<SpinFactor>) -> Self {
        self.spins = spins;
        self
    }

    /// Reversed product with every factor adjointed and the coupling
    /// conjugated. Fermionic and impurity factors act on disjoint qubits
    /// and commute, so each block is reversed independently.
    pub fn adjoint(&self) -> FermionTerm {
        FermionTerm {
            coupling: self.coupling.conj(),
            ops: self.ops.iter().rev().map(|o| o.adjoint()).collect(),
            spins: self
                .spins
                .iter()
                .rev()
                .map(|s| SpinFactor::new(s.impurity, s.op.adjoint()))
                .collect(),
        }
    }
}

impl fmt::Display for FermionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}i)", self.coupling.re, self.coupling.im)?;
        for o in &self.ops {
            write!(f, " {o}")?;
        }
        for s in &self.spins {
            write!(f, " s{}{}", s.op.symbol(), s.impurity)?;
        }
        Ok(())
    }
}

/// True iff every creation operator precedes every annihilation operator.
/// Diagnostic only.
pub fn normal_order_check(t: &FermionTerm) -> bool {
    let first_annihilator = t.ops.iter().position(|o| !o.dagger);
    match first_annihilator {
        None => true,
        Some(i) => t.ops[i..].iter().all(|o| !o.dagger),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermionHamiltonian {
    pub n_modes: usize,
    pub n_impurities: usize,
    /// Highest interaction order allowed, `None` for unbounded.
    pub max_order: Option<usize>,
    pub terms: Vec<FermionTerm>,
}

impl FermionHamiltonian {
    pub fn new(n_modes: usize, n_impurities: usize) -> Self {
        Self {
            n_modes,
            n_impurities,
            max_order: None,
            terms: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_modes + self.n_impurities
    }

    /// Appends a term after validating its indices and order.
    pub fn push(&mut self, term: FermionTerm) -> Result<()> {
        self.validate_term(&term)?;
        self.terms.push(term);
        Ok(())
    }

    pub fn validate_term(&self, term: &FermionTerm) -> Result<()> {
        let n = term.ops.len();
        if n < 2 {
            return Err(Error::InvalidTerm(format!(
                "{term}: Hamiltonian terms need at least two fermionic operators"
            )));
        }
        if let Some(alpha) = self.max_order {
            if n > alpha {
                return Err(Error::InvalidTerm(format!(
                    "{term}: order {n} exceeds the declared maximum {alpha}"
                )));
            }
        }
        for o in &term.ops {
            if o.mode == 0 || o.mode > self.n_modes {
                return Err(Error::IndexOutOfRange {
                    what: "fermionic mode",
                    index: o.mode,
                    max: self.n_modes,
                });
            }
        }
        for s in &term.spins {
            if s.impurity == 0 || s.impurity > self.n_impurities {
                return Err(Error::IndexOutOfRange {
                    what: "impurity",
                    index: s.impurity,
                    max: self.n_impurities,
                });
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits() == 0 {
            return Err(Error::Precondition("empty register".into()));
        }
        self.terms.iter().try_for_each(|t| self.validate_term(t))
    }

    /// True when the qubit image equals its own adjoint.
    pub fn is_hermitian(&self) -> Result<bool> {
        let jw = JordanWigner::for_hamiltonian(self)?;
        let mut sum = crate::pauli::PauliSum::zero(self.n_qubits());
        for t in &self.terms {
            sum = sum.add(&jw.term(t)?)?;
        }
        Ok(sum.imaginary_residue() <= CLOSURE_TOLERANCE)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: HamiltonianFile = serde_json::from_str(text)?;
        file.into_hamiltonian()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&HamiltonianFile::from(self))?)
    }
}

/// Adds every missing adjoint term. Two terms are identified when their
/// qubit images agree, so reorderings such as `n_1 n_2` vs `n_2 n_1` are
/// recognized as the same operator and self-adjoint terms are not doubled.
pub fn hermitian_closure(h: &FermionHamiltonian) -> Result<FermionHamiltonian> {
    h.validate()?;
    let jw = JordanWigner::for_hamiltonian(h)?;
    let mut out = h.clone();
    let mut images = Vec::with_capacity(h.terms.len());
    for t in &h.terms {
        images.push(jw.term(t)?);
    }
    for t in &h.terms {
        let adj = t.adjoint();
        let adj_image = jw.term(&adj)?;
        let present = images
            .iter()
            .any(|img| img.approx_eq(&adj_image, CLOSURE_TOLERANCE));
        if !present {
            images.push(adj_image);
            out.terms.push(adj);
        }
    }
    Ok(out)
}

/// On-disk Hamiltonian description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub n_modes: usize,
    #[serde(default)]
    pub n_impurities: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    /// Request automatic Hermitian closure on load.
    #[serde(default)]
    pub hermitian_closure: bool,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermRecord {
    pub coupling: [f64; 2],
    pub ops: Vec<(usize, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spins: Vec<(usize, String)>,
}

impl HamiltonianFile {
    pub fn into_hamiltonian(self) -> Result<FermionHamiltonian> {
        let mut h = FermionHamiltonian::new(self.n_modes, self.n_impurities);
        h.max_order = self.max_order;
        for rec in self.terms {
            let ops = rec
                .ops
                .iter()
                .map(|(mode, kind)| match kind.as_str() {
                    "c" => Ok(FermionOp::create(*mode)),
                    "a" => Ok(FermionOp::annihilate(*mode)),
                    other => Err(Error::Parse(format!(
                        "operator kind must be \"c\" or \"a\", got {other:?}"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            let spins = rec
                .spins
                .iter()
                .map(|(imp, sym)| SpinOp::from_symbol(sym).map(|op| SpinFactor::new(*imp, op)))
                .collect::<Result<Vec<_>>>()?;
            let term = FermionTerm::new(Complex64::new(rec.coupling[0], rec.coupling[1]), ops)
                .with_spins(spins);
            h.push(term)?;
        }
        h.validate()?;
        if self.hermitian_closure {
            h = hermitian_closure(&h)?;
        }
        Ok(h)
    }
}

impl From<&FermionHamiltonian> for HamiltonianFile {
    fn from(h: &FermionHamiltonian) -> Self {
        HamiltonianFile {
            n_modes: h.n_modes,
            n_impurities: h.n_impurities,
            max_order: h.max_order,
            hermitian_closure: false,
            terms: h
                .terms
                .iter()
                .map(|t| TermRecord {
                    coupling: [t.coupling.re, t.coupling.im],
                    ops: t
                        .ops
                        .iter()
                        .map(|o| (o.mode, if o.dagger { "c" } else { "a" }.to_string()))
                        .collect(),
                    spins: t
                        .spins
                        .iter()
                        .map(|s| (s.impurity, s.op.symbol().to_string()))
                        .collect(),
                })
                .collect(),
        }
    }
}
