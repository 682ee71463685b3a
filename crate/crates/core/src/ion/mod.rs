//! Trapped-ion compilation of Pauli exponentials.

pub mod circuit;
pub mod compile;
pub mod gate;
pub mod peephole;

pub use circuit::{circuit_unitary, Circuit, GateCounts, GateKind, GateRecord, GateRole, Instruction};
pub use compile::{
    compile_exponential, compile_plan, compile_plan_unshared, compile_rotation, MsFamily,
    SignRule,
};
pub use gate::{ms_unitary, Gate, RotAxis};
pub use peephole::share_gates;
