//! A small OpenQASM 2.0 subset: one quantum and at most one classical
//! register, `cx`, `h`, `x`, `z`, and `measure`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, OneQubitKind};
use crate::gf2::Cnot;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct QasmError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Sym(char),
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let err = |msg: String| QasmError { line, col, msg };
            if c.is_whitespace() {
                i += 1;
            } else if c == '/' && chars.get(i + 1) == Some(&'/') {
                break;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line,
                    col,
                });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Number(chars[start..i].iter().collect()),
                    line,
                    col,
                });
            } else if c == '"' {
                let end = chars[i + 1..]
                    .iter()
                    .position(|&d| d == '"')
                    .ok_or_else(|| err("unterminated string".into()))?;
                out.push(Token {
                    tok: Tok::Str(chars[i + 1..i + 1 + end].iter().collect()),
                    line,
                    col,
                });
                i += end + 2;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Token {
                    tok: Tok::Arrow,
                    line,
                    col,
                });
                i += 2;
            } else if "[],;".contains(c) {
                out.push(Token {
                    tok: Tok::Sym(c),
                    line,
                    col,
                });
                i += 1;
            } else {
                return Err(err(format!("unexpected character '{c}'")));
            }
        }
    }
    Ok(out)
}

struct Register {
    name: String,
    size: usize,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    qreg: Option<Register>,
    creg: Option<Register>,
    circuit: Option<Circuit>,
}

impl Parser {
    fn err_at(&self, tok: Option<&Token>, msg: impl Into<String>) -> QasmError {
        let (line, col) = tok.map_or(self.end, |t| (t.line, t.col));
        QasmError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<Token, QasmError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.err_at(None, format!("expected {what}, found end of input")))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), QasmError> {
        let t = self.next(&format!("'{c}'"))?;
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(self.err_at(Some(&t), format!("expected '{c}'")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), QasmError> {
        let t = self.next(what)?;
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => Err(self.err_at(Some(&t), format!("expected {what}"))),
        }
    }

    fn index(&mut self) -> Result<(usize, Token), QasmError> {
        let t = self.next("an index")?;
        match &t.tok {
            Tok::Number(s) => s
                .parse()
                .map(|v| (v, t.clone()))
                .map_err(|_| self.err_at(Some(&t), format!("bad index '{s}'"))),
            _ => Err(self.err_at(Some(&t), "expected an index")),
        }
    }

    /// `name[i]` checked against the register.
    fn operand(&mut self, quantum: bool) -> Result<usize, QasmError> {
        let (name, tok) = self.ident("a register operand")?;
        let reg = if quantum { &self.qreg } else { &self.creg };
        let kind = if quantum { "quantum" } else { "classical" };
        let Some(reg) = reg else {
            return Err(self.err_at(Some(&tok), format!("no {kind} register declared")));
        };
        if reg.name != name {
            return Err(self.err_at(Some(&tok), format!("unknown {kind} register '{name}'")));
        }
        let size = reg.size;
        self.expect_sym('[')?;
        let (idx, itok) = self.index()?;
        self.expect_sym(']')?;
        if idx >= size {
            return Err(self.err_at(
                Some(&itok),
                format!("index {idx} out of range for register '{name}' of size {size}"),
            ));
        }
        Ok(idx)
    }

    fn declare(&mut self, quantum: bool, tok: &Token) -> Result<(), QasmError> {
        let (name, _) = self.ident("a register name")?;
        self.expect_sym('[')?;
        let (size, _) = self.index()?;
        self.expect_sym(']')?;
        self.expect_sym(';')?;
        let slot = if quantum {
            &mut self.qreg
        } else {
            &mut self.creg
        };
        if slot.is_some() {
            return Err(self.err_at(Some(tok), "only one register of each kind is supported"));
        }
        *slot = Some(Register { name, size });
        if self.circuit.is_some() {
            return Err(self.err_at(Some(tok), "registers must be declared before gates"));
        }
        Ok(())
    }

    fn push(&mut self, gate: Gate, tok: &Token) -> Result<(), QasmError> {
        let circuit = self.circuit.get_or_insert_with(|| {
            Circuit::with_clbits(
                self.qreg.as_ref().map_or(0, |r| r.size),
                self.creg.as_ref().map_or(0, |r| r.size),
            )
        });
        circuit.push(gate).map_err(|e| {
            let msg = match e {
                CircuitError::SameControlTarget(q) => {
                    format!("cx control and target are the same qubit {q}")
                }
                other => other.to_string(),
            };
            QasmError {
                line: tok.line,
                col: tok.col,
                msg,
            }
        })
    }

    fn statement(&mut self) -> Result<(), QasmError> {
        let (word, tok) = self.ident("a statement")?;
        match word.as_str() {
            "OPENQASM" => {
                let v = self.next("a version")?;
                if v.tok != Tok::Number("2.0".into()) {
                    return Err(self.err_at(Some(&v), "only OPENQASM 2.0 is supported"));
                }
                self.expect_sym(';')
            }
            "include" => {
                let t = self.next("a file name")?;
                if !matches!(t.tok, Tok::Str(_)) {
                    return Err(self.err_at(Some(&t), "expected a quoted file name"));
                }
                self.expect_sym(';')
            }
            "qreg" => self.declare(true, &tok),
            "creg" => self.declare(false, &tok),
            "cx" => {
                let c = self.operand(true)?;
                self.expect_sym(',')?;
                let t = self.operand(true)?;
                self.expect_sym(';')?;
                self.push(Gate::Cnot(Cnot::new(c, t)), &tok)
            }
            "h" | "x" | "z" => {
                let kind = match word.as_str() {
                    "h" => OneQubitKind::H,
                    "x" => OneQubitKind::X,
                    _ => OneQubitKind::Z,
                };
                let qubit = self.operand(true)?;
                self.expect_sym(';')?;
                self.push(Gate::One { kind, qubit }, &tok)
            }
            "measure" => {
                let qubit = self.operand(true)?;
                let arrow = self.next("'->'")?;
                if arrow.tok != Tok::Arrow {
                    return Err(self.err_at(Some(&arrow), "expected '->'"));
                }
                let clbit = self.operand(false)?;
                self.expect_sym(';')?;
                self.push(Gate::Measure { qubit, clbit }, &tok)
            }
            other => Err(self.err_at(Some(&tok), format!("unsupported statement '{other}'"))),
        }
    }
}

pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
    let toks = lex(text)?;
    let end = text
        .lines()
        .enumerate()
        .last()
        .map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        qreg: None,
        creg: None,
        circuit: None,
    };
    while p.peek().is_some() {
        p.statement()?;
    }
    Ok(p.circuit.unwrap_or_else(|| {
        Circuit::with_clbits(
            p.qreg.as_ref().map_or(0, |r| r.size),
            p.creg.as_ref().map_or(0, |r| r.size),
        )
    }))
}

pub fn write(c: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", c.n()).unwrap();
    if c.clbits() > 0 {
        writeln!(out, "creg c[{}];", c.clbits()).unwrap();
    }
    for g in c.gates() {
        writeln!(out, "{g};").unwrap();
    }
    out
}
