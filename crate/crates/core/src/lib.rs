//! Noise-aware synthesis of CNOT circuits under nearest-neighbor constraints.
//!
//! The pipeline picks an initial placement of logical qubits on the device
//! (preferring qubits whose removal keeps the device connected), then reduces
//! the circuit's parity matrix to the identity one diagonal layer at a time,
//! routing each row operation through low-error Steiner trees. The recorded
//! operations, reversed, form the output circuit.

pub mod arch;
pub mod circuit;
pub mod cli;
pub mod gf2;
pub mod mapping;
pub mod qasm;
pub mod rng;
pub mod steiner;
pub mod synth;
