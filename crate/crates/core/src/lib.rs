//! Simulation of fermionic lattice models on a trapped-ion quantum computer.
//!
//! The pipeline runs fermionic Hamiltonian ([`fermion`], [`models`]) to
//! qubit Hamiltonian ([`jw`], [`pauli`]) to product-formula schedule
//! ([`trotter`]) to Molmer-Sorensen gate circuit ([`ion`]). A dense
//! state-vector simulator ([`sim`]) checks every stage, and [`experiment`]
//! drives fidelity scans and resource reports.
//!
//! Qubits and modes are 1-based in every public interface. Qubit `q` is bit
//! `q - 1` of a basis-state index.

pub mod error;
pub mod experiment;
pub mod fermion;
pub mod ion;
pub mod jw;
pub mod linalg;
pub mod models;
pub mod pauli;
pub mod sim;
pub mod trotter;

pub use error::{Error, Result};
pub use fermion::{FermionHamiltonian, FermionOp, FermionTerm, SpinFactor, SpinOp};
pub use ion::{Circuit, Gate};
pub use jw::{jw_hamiltonian, JordanWigner, JwConvention};
pub use models::{build_hubbard, build_kondo, build_tunneling, HubbardSpec, KondoSpec, TunnelingSpec};
pub use pauli::{Letter, PauliString, PauliSum, PauliTerm};
pub use trotter::{make_plan, TrotterPlan};
