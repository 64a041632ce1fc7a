//! Toolkit for photonic measurement-based quantum computing with classical
//! feedforward control.
//!
//! The crate covers the whole loop around a gate-level circuit:
//!
//! * [`compiler`] translates circuits (arbitrary one-qubit rotations,
//!   nearest-neighbour CNOTs, identity wires) into per-row 16-bit
//!   program-word streams, basis-angle tables and entanglement schedules,
//!   and emits them as ROM / angle-table text;
//! * [`controller`] is a cycle-accurate functional model of the per-row
//!   digital control unit that consumes those words: shift register,
//!   byproduct registers, stored snapshots and the registered adaptive
//!   output, stepped by the X_p / X_s / X_r clock events;
//! * [`simulator`] streams the cluster state two columns at a time,
//!   measures with controller-supplied bases, corrects byproducts and
//!   compares against a direct gate-model run;
//! * [`verifier`] machine-checks the two-row CNOT pattern: stabilizer
//!   product identities with exact signs and an exhaustive
//!   outcome-branch check of the teleportation theorem;
//! * [`timing`] computes the photonic-clock budgets: delay-line length,
//!   analog slack, clock-phase legality and I/O pin scaling.
//!
//! See the `examples/` directory for runnable entry points per capability,
//! and the `mbqc` binary for the file-based command-line interface.

pub mod compiler;
pub mod controller;
pub mod error;
pub mod pattern;
pub mod pauli;
pub mod simulator;
pub mod state;
pub mod timing;
pub mod trace;
pub mod verifier;

pub use compiler::{compile, layout, Circuit, ProgramImage};
pub use controller::{ControllerArray, ProgramWord, WordFields};
pub use error::{Error, Result};
pub use pattern::{ByproductPair, GateSpec, Pattern};
pub use pauli::{Pauli, PauliString};
pub use simulator::{
    correct_final_state, corrected_readout, run_gate_model, run_mbqc, simulate_circuit,
    verify_equivalence, MbqcRun, RunResult,
};
pub use state::StateVector;
pub use trace::{Trace, TraceRecord};
