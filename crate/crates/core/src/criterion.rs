//! Search criteria as single-output boolean circuits.
//!
//! The gate count of a criterion is the processor size `p` and its depth is
//! the evaluation time `t` in cycles (one gate level per cycle).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::datastore::Dataset;
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Wire {
    Input(usize),
    Gate(usize),
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wire::Input(i) => write!(f, "x{i}"),
            Wire::Gate(i) => write!(f, "g{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Xor,
    Not,
    /// Fused XOR+NOT, counted as one gate.
    Xnor,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Not => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Xor => "XOR",
            GateKind::Not => "NOT",
            GateKind::Xnor => "XNOR",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "AND" => GateKind::And,
            "OR" => GateKind::Or,
            "XOR" => GateKind::Xor,
            "NOT" => GateKind::Not,
            "XNOR" => GateKind::Xnor,
            _ => return None,
        })
    }

    #[inline]
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            GateKind::And => a & b,
            GateKind::Or => a | b,
            GateKind::Xor => a ^ b,
            GateKind::Not => !a,
            GateKind::Xnor => !(a ^ b),
        }
    }
}

/// A gate and its operands. For `NOT` both operands are the same wire and
/// only the first is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    inputs: [Wire; 2],
}

impl Gate {
    pub fn not(a: Wire) -> Self {
        Self {
            kind: GateKind::Not,
            inputs: [a, a],
        }
    }

    pub fn binary(kind: GateKind, a: Wire, b: Wire) -> Self {
        assert_eq!(kind.arity(), 2, "{} is unary", kind.name());
        Self {
            kind,
            inputs: [a, b],
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn inputs(&self) -> &[Wire] {
        &self.inputs[..self.kind.arity()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Criterion {
    input_width: usize,
    gates: Vec<Gate>,
    output: Wire,
}

impl Criterion {
    /// Validates that every reference is an existing input or an earlier
    /// gate.
    pub fn new(input_width: usize, gates: Vec<Gate>, output: Wire) -> Result<Self> {
        if input_width == 0 {
            return Err(invalid("criterion needs at least one input"));
        }
        let check = |w: Wire, limit: usize| match w {
            Wire::Input(i) if i < input_width => Ok(()),
            Wire::Gate(i) if i < limit => Ok(()),
            w => Err(invalid(format!(
                "reference {w} is out of range or not earlier"
            ))),
        };
        for (i, g) in gates.iter().enumerate() {
            for &w in g.inputs() {
                check(w, i)?;
            }
        }
        check(output, gates.len())?;
        Ok(Self {
            input_width,
            gates,
            output,
        })
    }

    pub fn input_width(&self) -> usize {
        self.input_width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> Wire {
        self.output
    }

    /// `p`: the number of gates, including any that do not feed the output.
    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// `t`: the longest input-to-output path, counted in gates.
    pub fn depth(&self) -> usize {
        let mut levels: Vec<usize> = Vec::with_capacity(self.gates.len());
        let level = |w: Wire, levels: &[usize]| match w {
            Wire::Input(_) => 0,
            Wire::Gate(i) => levels[i],
        };
        for g in &self.gates {
            let l = g
                .inputs()
                .iter()
                .map(|&w| level(w, &levels))
                .max()
                .unwrap_or(0);
            levels.push(l + 1);
        }
        level(self.output, &levels)
    }

    pub fn evaluate(&self, dataset: &Dataset) -> Result<bool> {
        if dataset.width() != self.input_width {
            return Err(invalid(format!(
                "dataset has {} bits, criterion expects {}",
                dataset.width(),
                self.input_width
            )));
        }
        Ok(self.evaluate_with(|i| dataset.bit(i)))
    }

    /// Evaluate against an arbitrary bit source; `bit(i)` is only called for
    /// `i < input_width`.
    pub fn evaluate_with(&self, bit: impl Fn(usize) -> bool) -> bool {
        let mut values: Vec<bool> = Vec::with_capacity(self.gates.len());
        let read = |w: Wire, values: &[bool]| match w {
            Wire::Input(i) => bit(i),
            Wire::Gate(i) => values[i],
        };
        for g in &self.gates {
            let a = read(g.inputs[0], &values);
            let b = read(g.inputs[1], &values);
            values.push(g.kind.apply(a, b));
        }
        read(self.output, &values)
    }

    /// Canonical text form, one gate per line.
    pub fn serialize(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(s, "criterion d={}", self.input_width);
        for (i, g) in self.gates.iter().enumerate() {
            let _ = write!(s, "g{i} = {}", g.kind.name());
            for w in g.inputs() {
                let _ = write!(s, " {w}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "out = {}", self.output);
        s
    }

    /// Parse the line-oriented text form. Blank lines and lines starting
    /// with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        parse_text(text)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

fn perr(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_index(tok: &str, prefix: char) -> Option<usize> {
    let digits = tok.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// A gate line before reference resolution: line, kind, `(prefix, index)` refs.
type RawGate = (usize, GateKind, Vec<(char, usize)>);

fn parse_text(text: &str) -> Result<Criterion> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| perr(1, "empty criterion"))?;
    let width = header
        .strip_prefix("criterion")
        .map(str::trim)
        .and_then(|rest| rest.strip_prefix("d="))
        .and_then(|w| w.parse::<usize>().ok())
        .ok_or_else(|| perr(hline, "expected header `criterion d=<width>`"))?;
    if width == 0 {
        return Err(perr(hline, "width must be positive"));
    }

    // Collect raw references first so dangling and forward references can be
    // told apart once the total gate count is known.
    let mut raw: Vec<RawGate> = Vec::new();
    let mut output: Option<(usize, (char, usize))> = None;
    let mut last_line = hline;

    let parse_ref = |line: usize, tok: &str| -> Result<(char, usize)> {
        if let Some(i) = parse_index(tok, 'x') {
            if i >= width {
                return Err(perr(line, format!("input {tok} outside width {width}")));
            }
            Ok(('x', i))
        } else if let Some(i) = parse_index(tok, 'g') {
            Ok(('g', i))
        } else {
            Err(perr(line, format!("bad reference `{tok}`")))
        }
    };

    for (line, content) in lines {
        last_line = line;
        if output.is_some() {
            return Err(perr(line, "content after `out` line"));
        }
        let (lhs, rhs) = content
            .split_once('=')
            .ok_or_else(|| perr(line, "expected `<name> = ...`"))?;
        let lhs = lhs.trim();
        let mut toks = rhs.split_whitespace();
        if lhs == "out" {
            let tok = toks
                .next()
                .ok_or_else(|| perr(line, "missing output reference"))?;
            if toks.next().is_some() {
                return Err(perr(line, "exactly one output expected"));
            }
            output = Some((line, parse_ref(line, tok)?));
            continue;
        }
        let idx =
            parse_index(lhs, 'g').ok_or_else(|| perr(line, format!("bad gate name `{lhs}`")))?;
        if idx != raw.len() {
            return Err(perr(
                line,
                format!("gate g{idx} out of sequence, expected g{}", raw.len()),
            ));
        }
        let kind_tok = toks.next().ok_or_else(|| perr(line, "missing gate kind"))?;
        let kind = GateKind::from_name(kind_tok)
            .ok_or_else(|| perr(line, format!("unknown gate kind `{kind_tok}`")))?;
        let refs = toks
            .map(|t| parse_ref(line, t))
            .collect::<Result<Vec<_>>>()?;
        if refs.len() != kind.arity() {
            return Err(perr(
                line,
                format!(
                    "{} takes {} operand(s), got {}",
                    kind.name(),
                    kind.arity(),
                    refs.len()
                ),
            ));
        }
        raw.push((line, kind, refs));
    }

    let (out_line, out_ref) =
        output.ok_or_else(|| perr(last_line + 1, "missing `out = <ref>` line"))?;
    let total = raw.len();
    let resolve = |line: usize, (p, i): (char, usize), limit: usize| -> Result<Wire> {
        match p {
            'x' => Ok(Wire::Input(i)),
            _ if i >= total => Err(perr(
                line,
                format!("dangling reference g{i}, only {total} gates"),
            )),
            _ if i >= limit => Err(perr(
                line,
                format!("g{i} is not an earlier gate (cycle or out-of-order reference)"),
            )),
            _ => Ok(Wire::Gate(i)),
        }
    };

    let mut gates = Vec::with_capacity(total);
    for (idx, (line, kind, refs)) in raw.into_iter().enumerate() {
        let a = resolve(line, refs[0], idx)?;
        gates.push(match kind {
            GateKind::Not => Gate::not(a),
            k => Gate::binary(k, a, resolve(line, refs[1], idx)?),
        });
    }
    let output = resolve(out_line, out_ref, total)?;
    Criterion::new(width, gates, output)
}

/// Incremental circuit construction.
#[derive(Debug)]
pub struct CircuitBuilder {
    width: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
        }
    }

    pub fn input(&self, i: usize) -> Wire {
        assert!(i < self.width);
        Wire::Input(i)
    }

    pub fn push(&mut self, gate: Gate) -> Wire {
        self.gates.push(gate);
        Wire::Gate(self.gates.len() - 1)
    }

    pub fn not(&mut self, a: Wire) -> Wire {
        self.push(Gate::not(a))
    }

    pub fn gate(&mut self, kind: GateKind, a: Wire, b: Wire) -> Wire {
        self.push(Gate::binary(kind, a, b))
    }

    /// Reduce `leaves` with a balanced tree of `kind` gates: adjacent pairs
    /// are combined level by level, an odd leftover passes up unchanged.
    /// Uses `leaves.len() - 1` gates and `ceil(log2(len))` levels.
    pub fn tree(&mut self, kind: GateKind, mut leaves: Vec<Wire>) -> Wire {
        assert!(!leaves.is_empty());
        while leaves.len() > 1 {
            let mut next = Vec::with_capacity(leaves.len().div_ceil(2));
            for pair in leaves.chunks(2) {
                next.push(match *pair {
                    [a, b] => self.gate(kind, a, b),
                    [a] => a,
                    _ => unreachable!(),
                });
            }
            leaves = next;
        }
        leaves[0]
    }

    pub fn finish(self, output: Wire) -> Result<Criterion> {
        Criterion::new(self.width, self.gates, output)
    }
}

/// True iff the dataset equals `pattern` bit for bit.
///
/// One comparator gate per bit (`NOT x` where the pattern holds 0, the
/// buffer `AND x x` where it holds 1) feeds a balanced AND tree, giving
/// `2d - 1` gates and depth `1 + ceil(log2 d)` for every pattern.
pub fn equality_criterion(pattern: &[bool]) -> Result<Criterion> {
    if pattern.is_empty() {
        return Err(invalid("equality pattern must be nonempty"));
    }
    let mut b = CircuitBuilder::new(pattern.len());
    let bits: Vec<Wire> = pattern
        .iter()
        .enumerate()
        .map(|(i, &bit)| {
            let x = b.input(i);
            if bit {
                b.gate(GateKind::And, x, x)
            } else {
                b.not(x)
            }
        })
        .collect();
    let out = b.tree(GateKind::And, bits);
    b.finish(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }
}

/// Conjunctive normal form as a circuit: one shared NOT per negated
/// variable, a balanced OR tree per clause and a balanced AND tree over the
/// clauses. With no clauses the formula is the constant `XNOR x0 x0`.
pub fn cnf_criterion(clauses: &[Vec<Literal>], width: usize) -> Result<Criterion> {
    if width == 0 {
        return Err(invalid("CNF width must be positive"));
    }
    for (ci, clause) in clauses.iter().enumerate() {
        if clause.is_empty() {
            return Err(invalid(format!("clause {ci} is empty")));
        }
        if let Some(l) = clause.iter().find(|l| l.var >= width) {
            return Err(invalid(format!(
                "clause {ci} references variable {} beyond width {width}",
                l.var
            )));
        }
    }

    let mut b = CircuitBuilder::new(width);
    if clauses.is_empty() {
        let x = b.input(0);
        let t = b.gate(GateKind::Xnor, x, x);
        return b.finish(t);
    }

    let mut negations: Vec<Option<Wire>> = vec![None; width];
    let mut clause_wires = Vec::with_capacity(clauses.len());
    for clause in clauses {
        let lits = clause
            .iter()
            .map(|l| {
                let x = b.input(l.var);
                if !l.negated {
                    return x;
                }
                *negations[l.var].get_or_insert_with(|| b.not(x))
            })
            .collect();
        clause_wires.push(b.tree(GateKind::Or, lits));
    }
    let out = b.tree(GateKind::And, clause_wires);
    b.finish(out)
}
