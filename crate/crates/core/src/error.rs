use thiserror::Error;

use crate::circuit::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid circuit: {}", summarize(.0))]
    InvalidCircuit(Vec<Violation>),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("invalid measurement order: {0}")]
    InvalidOrder(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("semantic error at op {op_index}: {message}")]
    Semantic { op_index: usize, message: String },

    #[error("unsupported statement at line {line}: {statement}")]
    UnsupportedStatement { line: usize, statement: String },

    #[error("qubit budget {budget} is below the order width {width}")]
    BudgetTooSmall { budget: usize, width: usize },

    #[error("simulation limit exceeded: {0}")]
    OracleLimit(String),

    #[error("no feasible order found before the time limit")]
    Timeout,
}

fn summarize(violations: &[Violation]) -> String {
    let mut parts: Vec<String> = violations.iter().take(3).map(|v| v.to_string()).collect();
    if violations.len() > 3 {
        parts.push(format!("and {} more", violations.len() - 3));
    }
    parts.join("; ")
}
