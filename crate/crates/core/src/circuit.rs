//! Boolean circuits with fan-in at most two.
//!
//! ```text
//! # majority of three
//! INPUTS x1 x2 x3
//! a = AND x1 x2
//! b = AND x1 x3
//! c = AND x2 x3
//! d = OR a b
//! m = OR d c
//! OUTPUT m
//! ```
//!
//! Wire names match `[a-z][a-z0-9_]*`; `TRUE` and `FALSE` are constant gates.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::text::strip_comment;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Input(usize),
    Const(bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
}

/// Gates in topological order; the first `input_count` gates are the inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    names: Vec<String>,
    input_count: usize,
    output: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

#[derive(Default)]
struct Builder {
    gates: Vec<Gate>,
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Builder {
    fn define(&mut self, name: &str, line: usize, column: usize, gate: Gate) -> Result<()> {
        if !is_identifier(name) {
            return Err(syntax(line, column, format!("`{name}` is not a wire name")));
        }
        if self.index.contains_key(name) {
            return Err(Error::DuplicateWire {
                name: name.to_string(),
                line,
            });
        }
        self.index.insert(name.to_string(), self.gates.len());
        self.names.push(name.to_string());
        self.gates.push(gate);
        Ok(())
    }

    fn lookup(&self, name: &str, line: usize, column: usize) -> Result<usize> {
        if !is_identifier(name) {
            return Err(syntax(line, column, format!("`{name}` is not a wire name")));
        }
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UndefinedWire {
                name: name.to_string(),
                line,
            })
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut b = Builder::default();
    let mut input_count = 0;
    let mut output = None;
    let mut seen_statement = false;

    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let toks = tokens(strip_comment(raw));
        let Some(&(col, first)) = toks.first() else {
            continue;
        };
        if output.is_some() {
            return Err(syntax(no, col, "nothing may follow OUTPUT"));
        }
        match first {
            "INPUTS" => {
                if seen_statement {
                    return Err(syntax(no, col, "INPUTS must come first"));
                }
                for &(c, name) in &toks[1..] {
                    b.define(name, no, c, Gate::Input(input_count))?;
                    input_count += 1;
                }
            }
            "OUTPUT" => {
                let [_, (c, name)] = toks.as_slice() else {
                    return Err(syntax(no, col, "expected `OUTPUT <wire>`"));
                };
                output = Some(b.lookup(name, no, *c)?);
            }
            _ => {
                if toks.len() < 3 || toks[1].1 != "=" {
                    let c = toks.get(1).map_or(col + first.len(), |t| t.0);
                    return Err(syntax(no, c, "expected `<wire> = <gate>`"));
                }
                let (op_col, op) = toks[2];
                let args = &toks[3..];
                let arity = match op {
                    "AND" | "OR" => 2,
                    "NOT" => 1,
                    "TRUE" | "FALSE" => 0,
                    _ => return Err(syntax(no, op_col, format!("unknown gate `{op}`"))),
                };
                if args.len() != arity {
                    let c = args.get(arity).map_or(op_col, |t| t.0);
                    return Err(syntax(no, c, format!("{op} takes {arity} operand(s)")));
                }
                let arg = |k: usize| b.lookup(args[k].1, no, args[k].0);
                let gate = match op {
                    "AND" => Gate::And(arg(0)?, arg(1)?),
                    "OR" => Gate::Or(arg(0)?, arg(1)?),
                    "NOT" => Gate::Not(arg(0)?),
                    "TRUE" => Gate::Const(true),
                    _ => Gate::Const(false),
                };
                b.define(first, no, col, gate)?;
            }
        }
        seen_statement = true;
    }
    let output = output.ok_or(Error::NoOutput)?;
    Ok(Circuit {
        gates: b.gates,
        names: b.names,
        input_count,
        output,
    })
}

impl Circuit {
    pub fn input_count(&self) -> usize {
        self.input_count
    }

    /// All gates including the inputs.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    /// Number of AND, OR, NOT and constant gates.
    pub fn gate_count(&self) -> usize {
        self.gates.len() - self.input_count
    }

    /// Depth of every gate: inputs and constants 0, each AND/OR/NOT adds 1.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let d = match *gate {
                Gate::Input(_) | Gate::Const(_) => 0,
                Gate::Not(a) => depth[a] + 1,
                Gate::And(a, b) | Gate::Or(a, b) => usize::max(depth[a], depth[b]) + 1,
            };
            depth.push(d);
        }
        depth
    }

    pub fn depth(&self) -> usize {
        self.depths()[self.output]
    }

    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.input_count {
            return Err(Error::ArityMismatch {
                expected: self.input_count,
                got: x.len(),
            });
        }
        let mut value: Vec<bool> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let v = match *gate {
                Gate::Input(l) => x[l],
                Gate::Const(b) => b,
                Gate::Not(a) => !value[a],
                Gate::And(a, b) => value[a] && value[b],
                Gate::Or(a, b) => value[a] || value[b],
            };
            value.push(v);
        }
        Ok(value[self.output])
    }

    /// Source text that parses back to the same circuit.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.input_count > 0 {
            out.push_str("INPUTS ");
            out.push_str(&self.names[..self.input_count].join(" "));
            out.push('\n');
        }
        for (i, gate) in self.gates.iter().enumerate().skip(self.input_count) {
            let name = &self.names[i];
            let _ = match *gate {
                Gate::Input(_) => unreachable!("inputs come first"),
                Gate::Const(b) => writeln!(out, "{name} = {}", if b { "TRUE" } else { "FALSE" }),
                Gate::Not(a) => writeln!(out, "{name} = NOT {}", self.names[a]),
                Gate::And(a, b) => {
                    writeln!(out, "{name} = AND {} {}", self.names[a], self.names[b])
                }
                Gate::Or(a, b) => writeln!(out, "{name} = OR {} {}", self.names[a], self.names[b]),
            };
        }
        let _ = writeln!(out, "OUTPUT {}", self.names[self.output]);
        out
    }
}

/// Parses `0101`-style bit strings (spaces and commas ignored).
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::parse(format!("`{c}` is not a bit"))),
        })
        .collect()
}

/// All assignments of `n` bits in binary counting order, first input most significant.
pub fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << n).map(move |v| (0..n).map(|i| (v >> (n - 1 - i)) & 1 == 1).collect())
}
