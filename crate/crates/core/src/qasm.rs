//! OpenQASM 2.0 emission and parsing, restricted to `h`, `rx`, `rz`, `cx` and
//! `measure`.
//!
//! Register index `i` is chain position `i`; the chip qubit ids of the chain
//! travel in a `// chain:` comment so a parsed document can be re-attached to
//! the chip. Classical bit `l` always holds logical qubit `l`.

use std::fmt::{self, Write as _};
use std::path::Path;

use crate::circuit::Gate;
use crate::compiler::{asap_layers, PhysicalCircuit};
use crate::error::{Error, Result};
use crate::fmt::g17;

const HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QasmDocument(String);

impl QasmDocument {
    /// Wraps existing text without checking it; see [`QasmDocument::parse`].
    pub fn from_text(text: impl Into<String>) -> Self {
        QasmDocument(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn parse(&self) -> Result<PhysicalCircuit> {
        parse(&self.0)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, &self.0).map_err(|e| Error::io(path, e))
    }
}

impl fmt::Display for QasmDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn emit(pc: &PhysicalCircuit) -> QasmDocument {
    let mut out = String::from(HEADER);
    let chain: Vec<String> = pc.chain().iter().map(u32::to_string).collect();
    let _ = writeln!(out, "// chain: {}", chain.join(" "));
    let _ = writeln!(out, "qreg q[{}];", pc.num_qubits());
    let _ = writeln!(out, "creg c[{}];", pc.num_logical());
    for g in pc.gates() {
        let _ = match *g {
            Gate::H(q) => writeln!(out, "h q[{q}];"),
            Gate::Rx(q, t) => writeln!(out, "rx({}) q[{q}];", g17(t)),
            Gate::Rz(q, t) => writeln!(out, "rz({}) q[{q}];", g17(t)),
            Gate::Cnot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
            Gate::Rzz(..) | Gate::Swap(..) => unreachable!("physical circuits are native"),
        };
    }
    for (l, p) in pc.final_layout().iter().enumerate() {
        let _ = writeln!(out, "measure q[{p}] -> c[{l}];");
    }
    QasmDocument(out)
}

/// Parses a document in the emitted subset. Gates are re-layered ASAP, which
/// reproduces the cycles of any circuit that came out of the optimizer.
pub fn parse(text: &str) -> Result<PhysicalCircuit> {
    let mut p = Parser::default();
    for (i, line) in text.lines().enumerate() {
        p.line(i + 1, line)?;
    }
    p.finish(text.lines().count().max(1))
}

pub fn read(path: impl AsRef<Path>) -> Result<PhysicalCircuit> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text)
}

#[derive(Default)]
struct Parser {
    version: bool,
    include: bool,
    chain: Option<(usize, Vec<u32>)>,
    qreg: Option<usize>,
    creg: Option<usize>,
    gates: Vec<Gate>,
    measures: Vec<(usize, usize, usize)>,
}

/// Cursor over one statement; columns are 1-based byte offsets into the line.
struct Cursor<'a> {
    line: usize,
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        self.err_at(self.pos, msg)
    }

    fn err_at(&self, pos: usize, msg: impl Into<String>) -> Error {
        Error::parse(format!("line {} column {}", self.line, pos + 1), msg)
    }

    fn skip_ws(&mut self) {
        while self.s[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{tok}`")))
        }
    }

    fn ident(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let len = self.s[start..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.s.len() - start);
        self.pos += len;
        (start, &self.s[start..start + len])
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        let len = self.s[start..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.s.len() - start);
        self.pos += len;
        self.s[start..start + len]
            .parse()
            .map_err(|_| self.err_at(start, "expected an integer"))
    }

    fn real(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let len = self.s[start..].find(')').unwrap_or(self.s.len() - start);
        let tok = self.s[start..start + len].trim_end();
        self.pos += len;
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.err_at(start, format!("malformed real `{tok}`"))),
        }
    }

    /// `name[index]`, checking the register name and bounds.
    fn operand(&mut self, reg: &str, size: Option<usize>) -> Result<usize> {
        let (at, name) = self.ident();
        if name != reg {
            return Err(self.err_at(at, format!("expected register `{reg}`, found `{name}`")));
        }
        let size = size
            .ok_or_else(|| self.err_at(at, format!("register `{reg}` used before declaration")))?;
        self.expect("[")?;
        let idx_at = self.pos;
        let idx = self.int()?;
        self.expect("]")?;
        if idx >= size {
            return Err(self.err_at(
                idx_at,
                format!("index {idx} outside register `{reg}[{size}]`"),
            ));
        }
        Ok(idx)
    }

    fn end(&mut self) -> Result<()> {
        self.expect(";")?;
        self.skip_ws();
        if self.pos < self.s.len() {
            return Err(self.err("one statement per line"));
        }
        Ok(())
    }
}

impl Parser {
    fn line(&mut self, line: usize, raw: &str) -> Result<()> {
        let (code, comment) = match raw.find("//") {
            Some(k) => (&raw[..k], Some(&raw[k + 2..])),
            None => (raw, None),
        };
        if let Some(rest) = comment.and_then(|c| c.trim().strip_prefix("chain:")) {
            let ids = rest
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<Vec<u32>, _>>()
                .map_err(|_| Error::parse(format!("line {line}"), "malformed chain comment"))?;
            self.chain = Some((line, ids));
        }
        let mut c = Cursor {
            line,
            s: code.trim_end(),
            pos: 0,
        };
        c.skip_ws();
        if c.pos == c.s.len() {
            return Ok(());
        }
        let (at, kw) = c.ident();
        match kw {
            "OPENQASM" => {
                c.skip_ws();
                if !c.eat("2.0") {
                    return Err(c.err("only OPENQASM 2.0 is supported"));
                }
                self.version = true;
            }
            "include" => {
                c.expect("\"qelib1.inc\"")?;
                self.include = true;
            }
            _ if !self.version => return Err(c.err_at(at, "missing `OPENQASM 2.0;` header")),
            "qreg" | "creg" => {
                let (name_at, name) = c.ident();
                let want = if kw == "qreg" { "q" } else { "c" };
                if name != want {
                    return Err(c.err_at(name_at, format!("register must be named `{want}`")));
                }
                c.expect("[")?;
                let size = c.int()?;
                c.expect("]")?;
                let slot = if kw == "qreg" {
                    &mut self.qreg
                } else {
                    &mut self.creg
                };
                if slot.replace(size).is_some() {
                    return Err(c.err_at(at, format!("second `{kw}` declaration")));
                }
            }
            "h" => {
                let q = c.operand("q", self.qreg)?;
                self.gates.push(Gate::H(q));
            }
            "rx" | "rz" => {
                c.expect("(")?;
                let t = c.real()?;
                c.expect(")")?;
                let q = c.operand("q", self.qreg)?;
                self.gates.push(if kw == "rx" {
                    Gate::Rx(q, t)
                } else {
                    Gate::Rz(q, t)
                });
            }
            "cx" => {
                let a = c.operand("q", self.qreg)?;
                c.expect(",")?;
                let b_at = c.pos;
                let b = c.operand("q", self.qreg)?;
                if a == b {
                    return Err(c.err_at(b_at, "cx needs two distinct qubits"));
                }
                self.gates.push(Gate::cnot(a, b));
            }
            "measure" => {
                let q = c.operand("q", self.qreg)?;
                c.expect("->")?;
                let bit = c.operand("c", self.creg)?;
                self.measures.push((line, q, bit));
            }
            "" => return Err(c.err_at(at, "expected a statement")),
            other => return Err(c.err_at(at, format!("unknown gate `{other}`"))),
        }
        c.end()
    }

    fn finish(self, last_line: usize) -> Result<PhysicalCircuit> {
        let eof = |msg: &str| Error::parse(format!("line {last_line}"), msg);
        if !self.version || !self.include {
            return Err(eof("missing OPENQASM 2.0 header or qelib1.inc include"));
        }
        let n = self.qreg.ok_or_else(|| eof("no quantum register"))?;
        let m = self.creg.ok_or_else(|| eof("no classical register"))?;
        let mut layout = vec![None; m];
        for &(line, q, bit) in &self.measures {
            if layout[bit].replace(q).is_some() {
                return Err(Error::parse(
                    format!("line {line}"),
                    format!("c[{bit}] measured twice"),
                ));
            }
        }
        let layout = layout
            .into_iter()
            .enumerate()
            .map(|(l, p)| p.ok_or_else(|| eof(&format!("c[{l}] is never measured"))))
            .collect::<Result<Vec<_>>>()?;
        let chain = match self.chain {
            Some((line, ids)) if ids.len() != n => {
                return Err(Error::parse(
                    format!("line {line}"),
                    format!("chain comment lists {} qubits but q has {n}", ids.len()),
                ))
            }
            Some((_, ids)) => ids,
            None => (0..n as u32).collect(),
        };
        PhysicalCircuit::new(n, asap_layers(n, self.gates), layout, chain)
            .map_err(|e| eof(&e.to_string()))
    }
}
