//! Circuit serialization: the canonical JSON document format and an
//! OpenQASM 2 subset importer.

mod json;
mod qasm;

pub use json::{emit_json, parse_json, FORMAT_VERSION};
pub use qasm::import_qasm2_subset;

/// File extension used for circuit documents.
pub const FILE_EXTENSION: &str = ".qrc.json";
