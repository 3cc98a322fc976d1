// SPDX-License-Identifier: Apache-2.0

//! Text format for circuits, feedback circuits, catalog entries and truth
//! tables.
//!
//! ```text
//! # comment
//! .name fredkin
//! .v a,b,c
//! .c c=0
//! .g a,b
//! .f q->qin
//! .s qin=0
//! .o q
//! .realizes f3 a,b,c
//! .table 000 001 010 011 100 110 101 111
//! BEGIN
//! t3 a,b,c
//! END
//! ```
//!
//! `tK` is an X gate on K lines whose last name is the target, `v`/`v+` are
//! controlled V/V⁺ (control first), `swap`, `f3` (control first) and
//! `use NAME lines` for registry gates.

use std::fmt::Write as _;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::synthesis::TruthTable;

/// One `BEGIN`/`END` block together with the directives that precede it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitFile {
    pub name: Option<String>,
    pub circuit: Circuit,
    /// `(output line, input line)` pairs from `.f`.
    pub feedback: Vec<(usize, usize)>,
    /// Initial values of fed-back input lines from `.s`.
    pub initial: Vec<(usize, bool)>,
    /// Observed output line from `.o`.
    pub observe: Option<usize>,
    /// Gate this block claims to realize, from `.realizes`.
    pub realizes: Option<Gate>,
    /// Explicit output words over the logical (non-constant) lines, indexed
    /// by input word, from `.table`.
    pub table: Option<Vec<usize>>,
}

impl CircuitFile {
    pub fn new(circuit: Circuit) -> Self {
        CircuitFile {
            name: None,
            circuit,
            feedback: Vec::new(),
            initial: Vec::new(),
            observe: None,
            realizes: None,
            table: None,
        }
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// A whitespace-delimited token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Comma-separated items of `tok` with their columns. Items may also be
/// split across several tokens (`a, b`).
fn items<'a>(toks: &[Token<'a>]) -> Vec<Token<'a>> {
    let mut out = Vec::new();
    for t in toks {
        let mut offset = 0;
        for part in t.text.split(',') {
            if !part.is_empty() {
                out.push(Token {
                    text: part,
                    column: t.column + offset,
                });
            }
            offset += part.len() + 1;
        }
    }
    out
}

struct BlockParser {
    names: Option<Vec<String>>,
    file: CircuitFile,
    in_body: bool,
    table_bits: Option<usize>,
}

impl BlockParser {
    fn new() -> Self {
        BlockParser {
            names: None,
            file: CircuitFile::new(Circuit::new(0)),
            in_body: false,
            table_bits: None,
        }
    }

    fn line_of(&self, tok: &Token<'_>, ln: usize) -> Result<usize> {
        let names = self
            .names
            .as_ref()
            .ok_or_else(|| parse_err(ln, tok.column, "line names used before `.v`"))?;
        names
            .iter()
            .position(|n| n == tok.text)
            .ok_or_else(|| parse_err(ln, tok.column, format!("unknown line `{}`", tok.text)))
    }

    fn assignment(&self, tok: &Token<'_>, ln: usize) -> Result<(usize, bool)> {
        let (name, value) = tok
            .text
            .split_once('=')
            .ok_or_else(|| parse_err(ln, tok.column, "expected `name=0` or `name=1`"))?;
        let line = self.line_of(
            &Token {
                text: name,
                column: tok.column,
            },
            ln,
        )?;
        let value = match value {
            "0" => false,
            "1" => true,
            _ => {
                return Err(parse_err(
                    ln,
                    tok.column + name.len() + 1,
                    format!("constant value must be 0 or 1, got `{value}`"),
                ))
            }
        };
        Ok((line, value))
    }

    fn directive(&mut self, toks: &[Token<'_>], ln: usize) -> Result<()> {
        let head = toks[0];
        let args = &toks[1..];
        let need_args = || {
            if args.is_empty() {
                Err(parse_err(
                    ln,
                    head.column,
                    format!("`{}` needs arguments", head.text),
                ))
            } else {
                Ok(())
            }
        };
        match head.text {
            ".v" => {
                need_args()?;
                if self.names.is_some() {
                    return Err(parse_err(ln, head.column, "duplicate `.v` directive"));
                }
                let mut names: Vec<String> = Vec::new();
                for it in items(args) {
                    if names.iter().any(|n| n == it.text) {
                        return Err(parse_err(
                            ln,
                            it.column,
                            format!("duplicate line name `{}`", it.text),
                        ));
                    }
                    if !it.text.chars().all(|c| c.is_alphanumeric() || c == '_') {
                        return Err(parse_err(
                            ln,
                            it.column,
                            format!("invalid line name `{}`", it.text),
                        ));
                    }
                    names.push(it.text.to_string());
                }
                self.file.circuit = Circuit::with_names(names.clone());
                self.names = Some(names);
            }
            ".c" => {
                need_args()?;
                for it in items(args) {
                    let (line, value) = self.assignment(&it, ln)?;
                    self.file.circuit.set_constant(line, value);
                }
            }
            ".s" => {
                need_args()?;
                for it in items(args) {
                    let pair = self.assignment(&it, ln)?;
                    self.file.initial.push(pair);
                }
            }
            ".g" => {
                need_args()?;
                for it in items(args) {
                    let line = self.line_of(&it, ln)?;
                    self.file.circuit.mark_garbage(line);
                }
            }
            ".f" => {
                need_args()?;
                for it in items(args) {
                    let (out, inp) = it.text.split_once("->").ok_or_else(|| {
                        parse_err(ln, it.column, "feedback pair must look like `out->in`")
                    })?;
                    let out_line = self.line_of(
                        &Token {
                            text: out,
                            column: it.column,
                        },
                        ln,
                    )?;
                    let in_line = self.line_of(
                        &Token {
                            text: inp,
                            column: it.column + out.len() + 2,
                        },
                        ln,
                    )?;
                    self.file.feedback.push((out_line, in_line));
                }
            }
            ".o" => {
                let list = items(args);
                if list.len() != 1 {
                    return Err(parse_err(ln, head.column, "`.o` takes exactly one line"));
                }
                self.file.observe = Some(self.line_of(&list[0], ln)?);
            }
            ".name" => {
                if args.len() != 1 {
                    return Err(parse_err(ln, head.column, "`.name` takes exactly one word"));
                }
                self.file.name = Some(args[0].text.to_string());
            }
            ".realizes" => {
                need_args()?;
                let gate = self.gate(args, ln)?;
                self.file.realizes = Some(gate);
            }
            ".table" => {
                need_args()?;
                let width = self
                    .names
                    .as_ref()
                    .map(Vec::len)
                    .ok_or_else(|| parse_err(ln, head.column, "`.table` before `.v`"))?;
                for t in args {
                    let bits = *self.table_bits.get_or_insert(t.text.len());
                    let binary = !t.text.is_empty() && t.text.chars().all(|c| c == '0' || c == '1');
                    if t.text.len() != bits || bits > width || !binary {
                        return Err(parse_err(
                            ln,
                            t.column,
                            format!("table word `{}` must be {bits} binary digits", t.text),
                        ));
                    }
                    let rows = self.file.table.get_or_insert_with(Vec::new);
                    rows.push(usize::from_str_radix(t.text, 2).unwrap());
                }
            }
            other => {
                return Err(parse_err(
                    ln,
                    head.column,
                    format!("unknown directive `{other}`"),
                ));
            }
        }
        Ok(())
    }

    fn gate(&self, toks: &[Token<'_>], ln: usize) -> Result<Gate> {
        let head = toks[0];
        let (name_tok, line_toks) = if head.text == "use" {
            let name = toks
                .get(1)
                .ok_or_else(|| parse_err(ln, head.column, "`use` needs a gate name"))?;
            (Some(*name), &toks[2..])
        } else {
            (None, &toks[1..])
        };
        let list = items(line_toks);
        let mut lines = Vec::with_capacity(list.len());
        for it in &list {
            let l = self.line_of(it, ln)?;
            if lines.contains(&l) {
                return Err(parse_err(
                    ln,
                    it.column,
                    format!("line `{}` repeated", it.text),
                ));
            }
            lines.push(l);
        }
        let arity = |label: &str, want: usize| -> Result<()> {
            if lines.len() == want {
                Ok(())
            } else {
                Err(parse_err(
                    ln,
                    head.column,
                    format!(
                        "{label} requires {want} line{}",
                        if want == 1 { "" } else { "s" }
                    ),
                ))
            }
        };
        if let Some(name) = name_tok {
            if lines.is_empty() {
                return Err(parse_err(
                    ln,
                    name.column,
                    "registry gate needs at least one line",
                ));
            }
            return Ok(Gate::catalog(name.text, lines));
        }
        match head.text {
            "v" | "v+" => {
                let kind = if head.text == "v" {
                    GateKind::V
                } else {
                    GateKind::Vdag
                };
                match lines.len() {
                    1 => Ok(Gate::new(kind, vec![], vec![lines[0]])),
                    2 => Ok(Gate::new(kind, vec![lines[0]], vec![lines[1]])),
                    _ => Err(parse_err(
                        ln,
                        head.column,
                        format!("`{}` takes 1 or 2 lines", head.text),
                    )),
                }
            }
            "swap" => {
                arity("SWAP", 2)?;
                Ok(Gate::swap(lines[0], lines[1]))
            }
            "f3" => {
                arity("Fredkin", 3)?;
                Ok(Gate::fredkin(lines[0], lines[1], lines[2]))
            }
            t if t.starts_with('t')
                && t.len() > 1
                && t[1..].chars().all(|c| c.is_ascii_digit()) =>
            {
                let k: usize = t[1..]
                    .parse()
                    .map_err(|_| parse_err(ln, head.column, format!("bad gate `{t}`")))?;
                if k == 0 {
                    return Err(parse_err(ln, head.column, "`t0` is not a gate"));
                }
                let label = match k {
                    1 => "NOT".to_string(),
                    2 => "CNOT".to_string(),
                    3 => "Toffoli".to_string(),
                    _ => format!("t{k}"),
                };
                arity(&label, k)?;
                let target = lines[k - 1];
                Ok(Gate::mct(lines[..k - 1].to_vec(), target))
            }
            other => Err(parse_err(
                ln,
                head.column,
                format!("unknown gate `{other}`"),
            )),
        }
    }

    fn finish(self, ln: usize) -> Result<CircuitFile> {
        if self.names.is_none() {
            return Err(parse_err(ln, 1, "block has no `.v` directive"));
        }
        if let Err(v) = self.file.circuit.validate() {
            return Err(parse_err(ln, 1, Error::Invalid(v).to_string()));
        }
        if let (Some(rows), Some(bits)) = (&self.file.table, self.table_bits) {
            let want = 1usize << bits;
            if rows.len() != want {
                return Err(parse_err(
                    ln,
                    1,
                    format!("`.table` has {} words, expected {want}", rows.len()),
                ));
            }
        }
        Ok(self.file)
    }
}

/// Parse every block in `text`.
pub fn parse_blocks(text: &str) -> Result<Vec<CircuitFile>> {
    let mut blocks = Vec::new();
    let mut parser = BlockParser::new();
    let mut started = false;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let toks = tokens(strip_comment(raw));
        if toks.is_empty() {
            continue;
        }
        started = true;
        let head = toks[0].text;
        if parser.in_body {
            if head == "END" {
                if toks.len() > 1 {
                    return Err(parse_err(ln, toks[1].column, "unexpected text after END"));
                }
                let done = std::mem::replace(&mut parser, BlockParser::new());
                blocks.push(done.finish(ln)?);
                started = false;
            } else if head == "BEGIN" {
                return Err(parse_err(ln, toks[0].column, "nested BEGIN"));
            } else {
                let gate = parser.gate(&toks, ln)?;
                parser.file.circuit.push(gate);
            }
        } else if head == "BEGIN" {
            if toks.len() > 1 {
                return Err(parse_err(ln, toks[1].column, "unexpected text after BEGIN"));
            }
            if parser.names.is_none() {
                return Err(parse_err(ln, toks[0].column, "BEGIN before `.v`"));
            }
            parser.in_body = true;
        } else if head.starts_with('.') {
            parser.directive(&toks, ln)?;
        } else if head == "END" {
            return Err(parse_err(ln, toks[0].column, "END without BEGIN"));
        } else {
            return Err(parse_err(
                ln,
                toks[0].column,
                format!("gate `{head}` outside BEGIN/END"),
            ));
        }
    }
    if started {
        let last = text.lines().count().max(1);
        return Err(parse_err(last, 1, "missing END"));
    }
    Ok(blocks)
}

/// Parse a file holding exactly one block.
pub fn parse_circuit_file(text: &str) -> Result<CircuitFile> {
    let mut blocks = parse_blocks(text)?;
    match blocks.len() {
        1 => Ok(blocks.pop().unwrap()),
        0 => Err(parse_err(1, 1, "no circuit block found")),
        n => Err(parse_err(
            1,
            1,
            format!("expected one circuit block, found {n}"),
        )),
    }
}

/// Parse a single-block file and return only its circuit.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    Ok(parse_circuit_file(text)?.circuit)
}

fn gate_text(g: &Gate, names: &[String]) -> String {
    let list = |ls: &[usize]| {
        ls.iter()
            .map(|&l| names[l].as_str())
            .collect::<Vec<_>>()
            .join(",")
    };
    match g.kind() {
        GateKind::X => {
            let mut ls = g.controls().to_vec();
            ls.push(g.target());
            format!("t{} {}", ls.len(), list(&ls))
        }
        GateKind::V | GateKind::Vdag => {
            let op = if *g.kind() == GateKind::V { "v" } else { "v+" };
            let mut ls = g.controls().to_vec();
            ls.push(g.target());
            format!("{op} {}", list(&ls))
        }
        GateKind::Swap => format!("swap {}", list(g.targets())),
        GateKind::Fredkin => {
            let mut ls = g.controls().to_vec();
            ls.extend_from_slice(g.targets());
            format!("f3 {}", list(&ls))
        }
        GateKind::Catalog(name) => format!("use {name} {}", list(g.targets())),
    }
}

/// Canonical text of one block. Parsing the output yields an equal value.
pub fn emit_circuit_file(f: &CircuitFile) -> String {
    let c = &f.circuit;
    let names = c.names();
    let mut out = String::new();
    if let Some(n) = &f.name {
        let _ = writeln!(out, ".name {n}");
    }
    let _ = writeln!(out, ".v {}", names.join(","));
    if !c.constants().is_empty() {
        let list: Vec<String> = c
            .constants()
            .iter()
            .map(|(&l, &v)| format!("{}={}", names[l], u8::from(v)))
            .collect();
        let _ = writeln!(out, ".c {}", list.join(","));
    }
    if !c.garbage().is_empty() {
        let list: Vec<&str> = c.garbage().iter().map(|&l| names[l].as_str()).collect();
        let _ = writeln!(out, ".g {}", list.join(","));
    }
    if !f.feedback.is_empty() {
        let list: Vec<String> = f
            .feedback
            .iter()
            .map(|&(o, i)| format!("{}->{}", names[o], names[i]))
            .collect();
        let _ = writeln!(out, ".f {}", list.join(","));
    }
    if !f.initial.is_empty() {
        let list: Vec<String> = f
            .initial
            .iter()
            .map(|&(l, v)| format!("{}={}", names[l], u8::from(v)))
            .collect();
        let _ = writeln!(out, ".s {}", list.join(","));
    }
    if let Some(o) = f.observe {
        let _ = writeln!(out, ".o {}", names[o]);
    }
    if let Some(g) = &f.realizes {
        let _ = writeln!(out, ".realizes {}", gate_text(g, names));
    }
    if let Some(rows) = &f.table {
        let w = rows.len().max(1).trailing_zeros() as usize;
        for chunk in rows.chunks(8) {
            let words: Vec<String> = chunk.iter().map(|&r| format!("{r:0w$b}")).collect();
            let _ = writeln!(out, ".table {}", words.join(" "));
        }
    }
    out.push_str("BEGIN\n");
    for g in c.gates() {
        out.push_str(&gate_text(g, names));
        out.push('\n');
    }
    out.push_str("END\n");
    out
}

pub fn emit_circuit(c: &Circuit) -> String {
    emit_circuit_file(&CircuitFile::new(c.clone()))
}

/// Blocks separated by a blank line.
pub fn emit_blocks(blocks: &[CircuitFile]) -> String {
    blocks
        .iter()
        .map(emit_circuit_file)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parse `input -> output` rows written in binary. Rows may appear in any
/// order but every input word must occur exactly once.
pub fn parse_truth_table(text: &str) -> Result<TruthTable> {
    let mut entries: Vec<(usize, usize, usize)> = Vec::new();
    let mut shape: Option<(usize, usize)> = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        let arrow = body
            .find("->")
            .ok_or_else(|| parse_err(ln, 1, "expected `input -> output`"))?;
        let left = body[..arrow].trim();
        let right = body[arrow + 2..].trim();
        let lcol = body.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
        let rcol = arrow + 3 + (body[arrow + 2..].len() - body[arrow + 2..].trim_start().len());
        for (word, col) in [(left, lcol), (right, rcol)] {
            if word.is_empty() || !word.chars().all(|c| c == '0' || c == '1') {
                return Err(parse_err(ln, col, format!("`{word}` is not a binary word")));
            }
        }
        let this = (left.len(), right.len());
        match shape {
            None => shape = Some(this),
            Some(s) if s != this => {
                return Err(parse_err(
                    ln,
                    lcol,
                    format!(
                        "row width {}->{} differs from {}->{}",
                        this.0, this.1, s.0, s.1
                    ),
                ))
            }
            _ => {}
        }
        let input = usize::from_str_radix(left, 2).unwrap();
        let output = usize::from_str_radix(right, 2).unwrap();
        if entries.iter().any(|&(x, _, _)| x == input) {
            return Err(parse_err(ln, lcol, format!("input `{left}` listed twice")));
        }
        entries.push((input, output, ln));
    }
    let (n_in, n_out) = shape.ok_or_else(|| parse_err(1, 1, "empty truth table"))?;
    if entries.len() != 1 << n_in {
        return Err(parse_err(
            text.lines().count().max(1),
            1,
            format!(
                "truth table has {} rows, expected {}",
                entries.len(),
                1usize << n_in
            ),
        ));
    }
    entries.sort_unstable();
    let rows = entries.into_iter().map(|(_, o, _)| o).collect();
    TruthTable::new(n_in, n_out, rows)
}

pub fn emit_truth_table(t: &TruthTable) -> String {
    let (ni, no) = (t.n_in(), t.n_out());
    let mut out = String::new();
    for (i, &r) in t.rows().iter().enumerate() {
        let _ = writeln!(out, "{i:0ni$b} -> {r:0no$b}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toffoli_file_parses() {
        let c = parse_circuit(".v a,b,c\nBEGIN\nt3 a,b,c\nEND\n").unwrap();
        assert_eq!(c.width(), 3);
        assert_eq!(c.gates(), &[Gate::toffoli(0, 1, 2)]);
    }

    #[test]
    fn feedback_directive_is_kept() {
        let f = parse_circuit_file(".v qin,s,q\n.f q->qin\nBEGIN\nt2 s,q\nEND\n").unwrap();
        assert_eq!(f.feedback, vec![(2, 0)]);
    }

    #[test]
    fn cnot_arity_error() {
        let err = parse_circuit(".v a,b\nBEGIN\nt2 a\nEND\n").unwrap_err();
        match err {
            Error::Parse {
                line,
                column,
                message,
            } => {
                assert_eq!((line, column), (3, 1));
                assert_eq!(message, "CNOT requires 2 lines");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn errors_carry_columns() {
        let err = parse_circuit(".v a,b\nBEGIN\nt2 a,zz\nEND\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                column: 6,
                message: "unknown line `zz`".into()
            }
        );
        let dup = parse_circuit(".v a,a\nBEGIN\nEND\n").unwrap_err();
        assert!(dup.to_string().contains("duplicate line name"));
        let bad = parse_circuit(".q a\n").unwrap_err();
        assert!(bad.to_string().contains("unknown directive"));
    }

    #[test]
    fn every_directive_round_trips() {
        let text = "\
.name demo
.v a,b,c,d
.c d=1
.g a,b
.f c->a
.s a=1
.o c
.realizes f3 a,b,c
.table 0000 0001 0010 0011 0100 0101 0110 0111
.table 1000 1001 1010 1011 1100 1110 1101 1111
BEGIN
t1 a
t2 a,b
t3 a,b,c
t4 a,b,c,d
v a,b
v+ b,c
v d
swap a,d
f3 d,a,b
use FOO a,c
END
";
        let f = parse_circuit_file(text).unwrap();
        assert_eq!(emit_circuit_file(&f), text);
        assert_eq!(parse_circuit_file(&emit_circuit_file(&f)).unwrap(), f);
    }

    #[test]
    fn multiple_blocks() {
        let text = ".name x\n.v a\nBEGIN\nt1 a\nEND\n\n.name y\n.v a,b\nBEGIN\nEND\n";
        let blocks = parse_blocks(text).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(emit_blocks(&blocks), text);
        assert!(parse_circuit_file(text).is_err());
    }

    #[test]
    fn missing_end_is_reported() {
        assert!(parse_circuit(".v a\nBEGIN\nt1 a\n")
            .unwrap_err()
            .to_string()
            .contains("missing END"));
    }

    #[test]
    fn truth_table_round_trip() {
        let text = "00 -> 00\n01 -> 01\n10 -> 11\n11 -> 10\n";
        let t = parse_truth_table(text).unwrap();
        assert_eq!(t.rows(), &[0, 1, 3, 2]);
        assert_eq!(emit_truth_table(&t), text);
        let unordered =
            parse_truth_table("# cnot\n11 -> 10\n00 -> 00\n10 -> 11\n01 -> 01\n").unwrap();
        assert_eq!(unordered, t);
    }

    #[test]
    fn truth_table_errors() {
        assert!(parse_truth_table("0 -> 1\n").is_err());
        assert!(parse_truth_table("0 -> 1\n0 -> 0\n").is_err());
        assert!(parse_truth_table("0 -> 1\n1 -> 2\n").is_err());
        let irreversible = parse_truth_table("00 -> 0\n01 -> 0\n10 -> 0\n11 -> 1\n").unwrap();
        assert_eq!((irreversible.n_in(), irreversible.n_out()), (2, 1));
    }
}
