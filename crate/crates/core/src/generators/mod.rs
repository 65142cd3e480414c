//! Circuit families with known compression behaviour, random graphs and
//! QAOA instances.

mod brickwork;
mod bv;
mod family;
mod graph;
mod qaoa;
mod random;
mod tensor;

pub use brickwork::{brickwork_1d, brickwork_2d};
pub use bv::bernstein_vazirani;
pub use family::Family;
pub use graph::{random_u3r_graph, Graph};
pub use qaoa::{qaoa_maxcut, qaoa_u3r, DEFAULT_BETA, DEFAULT_GAMMA};
pub use random::{dual_advantage_circuit, random_circuit};
pub use tensor::{mera, mps_prep, qcnn, ttn};
