use std::collections::BTreeMap;
use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

use crate::circuit::{ensure_valid, validate, Circuit, ClbitId, Gate, Operation, QubitId, Rule};
use crate::error::{Error, Result};
use crate::gates::library_matrix;
use crate::matrix::Matrix;

pub const FORMAT_VERSION: &str = "1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpDoc {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clbit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: String,
    num_qubits: usize,
    num_clbits: usize,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
    ops: Vec<OpDoc>,
}

/// Compact JSON with every float written to 17 significant digits, which
/// round-trips any `f64` exactly.
struct ExactFloats;

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        writer.write_all(b": ")
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        if !first {
            writer.write_all(b", ")?;
        }
        Ok(())
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        CompactFormatter.begin_object_key(writer, first)?;
        if !first {
            writer.write_all(b" ")?;
        }
        Ok(())
    }
}

fn to_line<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

fn op_doc(i: usize, op: &Operation) -> Result<OpDoc> {
    let mut doc = OpDoc {
        kind: op.kind().to_string(),
        qubits: op.qubits().iter().map(|q| q.0).collect(),
        clbit: None,
        label: None,
        params: None,
        matrix: None,
    };
    match op {
        Operation::Measure { clbit, .. } => doc.clbit = clbit.map(|c| c.0),
        Operation::Gate(g) => {
            if g.params.iter().any(|p| !p.is_finite()) {
                return Err(Error::Semantic {
                    op_index: i,
                    message: "non-finite gate parameter".into(),
                });
            }
            doc.label = Some(g.label.clone());
            if !g.params.is_empty() {
                doc.params = Some(g.params.clone());
            }
            if let Some(m) = &g.matrix {
                if library_matrix(&g.label, &g.params, g.arity()).as_ref() != Some(m) {
                    doc.matrix = Some(m.entries().iter().map(|z| [z.re, z.im]).collect());
                }
            }
        }
        Operation::Prepare(_) | Operation::Reset(_) => {}
    }
    Ok(doc)
}

/// Canonical JSON document for a valid circuit: one operation per line,
/// floats at 17 significant digits, gate matrices written only when they
/// differ from the library definition of the label.
pub fn emit_json(circuit: &Circuit) -> Result<String> {
    ensure_valid(circuit)?;
    let mut out = String::from("{\n");
    out += &format!("  \"version\": {},\n", to_line(&FORMAT_VERSION)?);
    out += &format!("  \"num_qubits\": {},\n", circuit.num_qubits());
    out += &format!("  \"num_clbits\": {},\n", circuit.num_clbits());
    if !circuit.metadata.is_empty() {
        out += &format!("  \"metadata\": {},\n", to_line(&circuit.metadata)?);
    }
    out += "  \"ops\": [";
    for (i, op) in circuit.ops().iter().enumerate() {
        out += if i == 0 { "\n    " } else { ",\n    " };
        out += &to_line(&op_doc(i, op)?)?;
    }
    out += if circuit.ops().is_empty() { "]\n}\n" } else { "\n  ]\n}\n" };
    Ok(out)
}

fn semantic(op_index: usize, message: impl Into<String>) -> Error {
    Error::Semantic {
        op_index,
        message: message.into(),
    }
}

fn build_op(i: usize, doc: OpDoc, num_qubits: usize) -> Result<Operation> {
    if let Some(q) = doc.qubits.iter().find(|&&q| q >= num_qubits) {
        return Err(semantic(i, format!("qubit {q} out of range")));
    }
    let single = || -> Result<QubitId> {
        match doc.qubits.as_slice() {
            [q] => Ok(QubitId(*q)),
            _ => Err(semantic(i, format!("{} takes exactly one qubit", doc.kind))),
        }
    };
    let no_gate_fields = |what: &str| -> Result<()> {
        if doc.label.is_some() || doc.params.is_some() || doc.matrix.is_some() {
            return Err(semantic(i, format!("{what} has gate fields")));
        }
        Ok(())
    };
    if doc.kind != "measure" && doc.clbit.is_some() {
        return Err(semantic(i, format!("{} has a clbit", doc.kind)));
    }
    Ok(match doc.kind.as_str() {
        "prep" => {
            no_gate_fields("prep")?;
            Operation::Prepare(single()?)
        }
        "reset" => {
            no_gate_fields("reset")?;
            Operation::Reset(single()?)
        }
        "measure" => {
            no_gate_fields("measure")?;
            Operation::Measure {
                qubit: single()?,
                clbit: doc.clbit.map(ClbitId),
            }
        }
        "gate" => {
            let label = doc.label.clone().ok_or_else(|| semantic(i, "gate without label"))?;
            let params = doc.params.clone().unwrap_or_default();
            let arity = doc.qubits.len();
            let matrix = match &doc.matrix {
                Some(entries) => {
                    let data = entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                    let m = Matrix::from_row_major(data).ok_or_else(|| semantic(i, "matrix is not square"))?;
                    Some(m)
                }
                None => library_matrix(&label, &params, arity),
            };
            Operation::Gate(Gate {
                label,
                params,
                qubits: doc.qubits.iter().copied().map(QubitId).collect(),
                matrix,
            })
        }
        other => return Err(semantic(i, format!("unknown op kind {other:?}"))),
    })
}

/// Parses a circuit document and checks every circuit invariant.
pub fn parse_json(text: &str) -> Result<Circuit> {
    let doc: Document = serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
        }
    })?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::UnsupportedInput(format!(
            "document version {:?}, expected {FORMAT_VERSION:?}",
            doc.version
        )));
    }
    let ops = doc
        .ops
        .into_iter()
        .enumerate()
        .map(|(i, op)| build_op(i, op, doc.num_qubits))
        .collect::<Result<Vec<_>>>()?;
    let mut circuit = Circuit::from_ops(doc.num_qubits, doc.num_clbits, ops);
    circuit.metadata = doc.metadata;
    // A malformed operation is a document error; a well-formed operation
    // used out of order makes the circuit invalid instead.
    let violations = validate(&circuit);
    let malformed = |r: Rule| {
        matches!(
            r,
            Rule::QubitOutOfRange
                | Rule::ClbitOutOfRange
                | Rule::DuplicateQubit
                | Rule::EmptyGate
                | Rule::MatrixDimension
                | Rule::MatrixNotUnitary
        )
    };
    if let Some((i, v)) = violations
        .iter()
        .filter(|v| malformed(v.rule))
        .find_map(|v| v.op_index.map(|i| (i, v)))
    {
        return Err(semantic(i, format!("{} ({})", v.rule.describe(), v.detail)));
    }
    if !violations.is_empty() {
        return Err(Error::InvalidCircuit(violations));
    }
    Ok(circuit)
}
