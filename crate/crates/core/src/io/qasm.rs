use std::collections::HashMap;

use crate::circuit::{ensure_valid, Circuit, Gate, Operation, QubitId};
use crate::error::{Error, Result};

/// Gates accepted by the importer: name, parameter count, arity.
const GATES: &[(&str, usize, usize)] = &[
    ("h", 0, 1),
    ("x", 0, 1),
    ("z", 0, 1),
    ("rx", 1, 1),
    ("rz", 1, 1),
    ("cx", 0, 2),
    ("cz", 0, 2),
    ("rzz", 1, 2),
];

struct Register {
    offset: usize,
    size: usize,
}

struct Importer {
    qregs: HashMap<String, Register>,
    cregs: HashMap<String, Register>,
    num_qubits: usize,
    num_clbits: usize,
    ops: Vec<Operation>,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column: 1,
        message: message.into(),
    }
}

fn unsupported(line: usize, statement: &str) -> Error {
    Error::UnsupportedStatement {
        line,
        statement: statement.to_string(),
    }
}

/// Splits `name[size]` or `name`.
fn split_indexed(text: &str, line: usize) -> Result<(&str, Option<usize>)> {
    let text = text.trim();
    match text.split_once('[') {
        None => Ok((text, None)),
        Some((name, rest)) => {
            let idx = rest
                .strip_suffix(']')
                .and_then(|i| i.trim().parse().ok())
                .ok_or_else(|| syntax(line, format!("bad index in {text:?}")))?;
            Ok((name.trim(), Some(idx)))
        }
    }
}

impl Importer {
    fn declare(&mut self, quantum: bool, decl: &str, line: usize) -> Result<()> {
        let (name, size) = split_indexed(decl, line)?;
        let size = size.ok_or_else(|| syntax(line, "register declaration needs a size"))?;
        let (regs, count) = if quantum {
            (&mut self.qregs, &mut self.num_qubits)
        } else {
            (&mut self.cregs, &mut self.num_clbits)
        };
        if regs.contains_key(name) {
            return Err(syntax(line, format!("register {name} declared twice")));
        }
        regs.insert(name.to_string(), Register { offset: *count, size });
        *count += size;
        Ok(())
    }

    /// Resolves an argument to the flat indices it denotes (a whole
    /// register expands to all of its bits).
    fn resolve(&self, quantum: bool, arg: &str, line: usize) -> Result<Vec<usize>> {
        let (name, idx) = split_indexed(arg, line)?;
        let regs = if quantum { &self.qregs } else { &self.cregs };
        let reg = regs
            .get(name)
            .ok_or_else(|| syntax(line, format!("undeclared register {name}")))?;
        match idx {
            Some(i) if i < reg.size => Ok(vec![reg.offset + i]),
            Some(i) => Err(syntax(line, format!("index {i} out of range for {name}"))),
            None => Ok((reg.offset..reg.offset + reg.size).collect()),
        }
    }

    fn statement(&mut self, stmt: &str, line: usize) -> Result<()> {
        let (head, rest) = match stmt.find(|c: char| c.is_whitespace() || c == '(') {
            Some(i) => (&stmt[..i], stmt[i..].trim()),
            None => (stmt, ""),
        };
        match head {
            "OPENQASM" if rest == "2.0" => Ok(()),
            "include" if rest == "\"qelib1.inc\"" => Ok(()),
            "qreg" => self.declare(true, rest, line),
            "creg" => self.declare(false, rest, line),
            "barrier" => Ok(()),
            "measure" => {
                let (q, c) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax(line, "measure needs `->`"))?;
                let qs = self.resolve(true, q, line)?;
                let cs = self.resolve(false, c, line)?;
                if qs.len() != cs.len() {
                    return Err(syntax(line, "measure operands differ in size"));
                }
                for (q, c) in qs.into_iter().zip(cs) {
                    self.ops.push(Operation::Measure {
                        qubit: QubitId(q),
                        clbit: Some(crate::circuit::ClbitId(c)),
                    });
                }
                Ok(())
            }
            "reset" => {
                for q in self.resolve(true, rest, line)? {
                    self.ops.push(Operation::Reset(QubitId(q)));
                }
                Ok(())
            }
            name => {
                let &(_, nparams, arity) = GATES
                    .iter()
                    .find(|(g, _, _)| *g == name)
                    .ok_or_else(|| unsupported(line, stmt))?;
                let (params, args) = if let Some(inner) = rest.strip_prefix('(') {
                    let close = inner.find(')').ok_or_else(|| syntax(line, "unclosed parameter list"))?;
                    let params = inner[..close]
                        .split(',')
                        .map(|e| eval(e, line))
                        .collect::<Result<Vec<f64>>>()?;
                    (params, inner[close + 1..].trim())
                } else {
                    (Vec::new(), rest)
                };
                if params.len() != nparams {
                    return Err(syntax(line, format!("{name} takes {nparams} parameters")));
                }
                let operands = args
                    .split(',')
                    .map(|a| self.resolve(true, a, line))
                    .collect::<Result<Vec<_>>>()?;
                if operands.len() != arity {
                    return Err(syntax(line, format!("{name} takes {arity} qubits")));
                }
                // Whole-register operands broadcast element-wise.
                let reps = operands.iter().map(Vec::len).max().unwrap_or(1);
                if operands.iter().any(|o| o.len() != 1 && o.len() != reps) {
                    return Err(syntax(line, "register operands differ in size"));
                }
                for r in 0..reps {
                    let qubits: Vec<usize> = operands.iter().map(|o| if o.len() == 1 { o[0] } else { o[r] }).collect();
                    self.ops.push(Operation::Gate(Gate::named(name, &params, &qubits)));
                }
                Ok(())
            }
        }
    }
}

/// Imports an OpenQASM 2 program restricted to register declarations,
/// `h x z rx rz cx cz rzz`, `barrier` (ignored), `measure` and `reset`.
/// Every declared qubit is prepared at the start of the circuit.
pub fn import_qasm2_subset(text: &str) -> Result<Circuit> {
    let mut imp = Importer {
        qregs: HashMap::new(),
        cregs: HashMap::new(),
        num_qubits: 0,
        num_clbits: 0,
        ops: Vec::new(),
    };
    let mut pending = String::new();
    let mut start_line = 1;
    for (i, raw) in text.lines().enumerate() {
        let code = raw.split("//").next().unwrap_or("");
        for (k, piece) in code.split(';').enumerate() {
            if k > 0 {
                let stmt = pending.trim().to_string();
                if !stmt.is_empty() {
                    imp.statement(&stmt, start_line)?;
                }
                pending.clear();
            }
            if pending.trim().is_empty() {
                start_line = i + 1;
            }
            pending.push_str(piece);
            pending.push(' ');
        }
    }
    if !pending.trim().is_empty() {
        return Err(syntax(start_line, "statement without terminating `;`"));
    }

    let mut ops: Vec<Operation> = (0..imp.num_qubits).map(|q| Operation::Prepare(QubitId(q))).collect();
    ops.extend(imp.ops);
    let circuit = Circuit::from_ops(imp.num_qubits, imp.num_clbits, ops);
    ensure_valid(&circuit)?;
    Ok(circuit)
}

/// Evaluates a parameter expression: numbers, `pi`, `+ - * /`, unary minus
/// and parentheses.
fn eval(expr: &str, line: usize) -> Result<f64> {
    let tokens = tokenize(expr, line)?;
    let mut p = Parser { tokens, pos: 0, line };
    let v = p.sum()?;
    if p.pos != p.tokens.len() {
        return Err(syntax(line, format!("trailing input in expression {expr:?}")));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Op(char),
}

fn tokenize(expr: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = expr.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if "+-*/()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Num(s.parse().map_err(|_| syntax(line, format!("bad number {s:?}")))?));
        } else if c == 'p' && chars.get(i + 1) == Some(&'i') {
            out.push(Token::Num(std::f64::consts::PI));
            i += 2;
        } else {
            return Err(syntax(line, format!("unexpected {c:?} in expression")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn sum(&mut self) -> Result<f64> {
        let mut v = self.product()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let r = self.product()?;
            v = if op == '+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        while let Some(Token::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let r = self.unary()?;
            v = if op == '*' { v * r } else { v / r };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<f64> {
        match self.peek().cloned() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(&Token::Op(')')) {
                    return Err(syntax(self.line, "missing `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(Token::Num(v)) => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(syntax(self.line, "incomplete expression")),
        }
    }
}
