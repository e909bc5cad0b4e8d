//! Synthesis of minimal binary linear systematic code circuits.
//!
//! Given a message size `k` and a minimum distance `d`, the synthesizer looks
//! for a parity generator matrix that uses as few individual inputs as
//! possible (then as few parity bits as possible), proves that no smaller
//! solution exists up to one extra parity bit, and turns the result into a
//! gate-level netlist whose parity outputs share no gates.

pub mod certify;
pub mod combtree;
pub mod error;
pub mod faultcheck;
pub mod feasibility;
pub mod gf2;
pub mod lexicode;
pub mod netlist;
pub mod partitions;
pub mod smt;
pub mod synth;

pub use error::{Error, Result};
pub use gf2::{CodeParams, ParityGeneratorMatrix, TruthTable, Word};
