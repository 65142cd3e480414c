//! Qubit-reuse compilation.
//!
//! Rewrites a measurement-terminated quantum circuit into an equivalent one
//! that runs on fewer qubits by measuring outputs early, resetting them, and
//! reusing the wires as later inputs. The pipeline is:
//!
//! 1. [`causal::compute_cones`] finds each output's past causal cone.
//! 2. An order search ([`order::greedy_brute_first`],
//!    [`order::exact_order`]) picks a measurement order minimizing the peak
//!    number of live wires.
//! 3. [`rewrite::rewrite`] emits the compressed circuit for that order.
//!
//! [`compile`] runs the whole pipeline.
//!
//! [`sim`] holds an exact branching simulator used to certify that the
//! compiled circuit samples from the same distribution as the original.

pub mod causal;
pub mod circuit;
mod compile;
pub mod error;
pub mod gates;
pub mod generators;
pub mod io;
pub mod matrix;
pub mod order;
pub mod rewrite;
pub mod sim;

pub use compile::{compile, Compilation, CompileOptions};
pub use circuit::{dual, validate, Circuit, ClbitId, Gate, Operation, QubitId, Violation};
pub use error::{Error, Result};
