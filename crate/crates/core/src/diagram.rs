//! Address diagrams: a line-oriented text format for gate programs.
//!
//! ```text
//! width 3
//! bit Num1 2
//! bit Num0 1
//! bit f 0
//! not Num1
//! toggle f when Num1,Num0
//! not Num1
//! ```
//!
//! `width` comes first, then `bit` declarations, then one gate per line.
//! `not <targets>` is an unconditional NOT; `toggle <targets> when <controls>`
//! is a (multi-)controlled NOT. Operands are declared names or decimal
//! indices. `#` starts a comment. LF and CRLF line endings are accepted.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::engine::Gate;

/// An ordered list of gates over `width` bits, with optional bit names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub width: usize,
    pub names: BTreeMap<String, usize>,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    MissingWidth,
    ZeroWidth,
    EmptyTargets,
    IndexOutOfRange { index: usize },
    ControlTargetOverlap { index: usize },
    DuplicateName { name: String },
    InvalidName { name: String },
    NameOutOfRange { name: String, index: usize },
    AliasedIndex { index: usize, first: String, second: String },
}

/// A single constraint violation, tagged with the offending gate if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub gate: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = self.gate {
            write!(f, "gate {g}: ")?;
        }
        match &self.kind {
            ViolationKind::MissingWidth => write!(f, "missing width"),
            ViolationKind::ZeroWidth => write!(f, "width must be positive"),
            ViolationKind::EmptyTargets => write!(f, "empty targets"),
            ViolationKind::IndexOutOfRange { index } => write!(f, "index out of range: {index}"),
            ViolationKind::ControlTargetOverlap { index } => {
                write!(f, "target in controls: {index}")
            }
            ViolationKind::DuplicateName { name } => write!(f, "duplicate name: {name}"),
            ViolationKind::InvalidName { name } => write!(f, "invalid name: {name:?}"),
            ViolationKind::NameOutOfRange { name, index } => {
                write!(f, "name {name} index out of range: {index}")
            }
            ViolationKind::AliasedIndex { index, first, second } => {
                write!(f, "names {first} and {second} both map to index {index}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid program: {}", join_violations(.0))]
    Validation(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

fn is_identifier(s: &str) -> bool {
    if s == "when" {
        return false;
    }
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Program {
    pub fn new(width: usize) -> Self {
        Program {
            width,
            ..Default::default()
        }
    }

    pub fn with_gates(width: usize, gates: Vec<Gate>) -> Self {
        Program {
            width,
            names: BTreeMap::new(),
            gates,
        }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }

    pub fn name_of(&self, index: usize) -> Option<&str> {
        self.names
            .iter()
            .find(|(_, &i)| i == index)
            .map(|(n, _)| n.as_str())
    }

    /// Resolves an operand written as a declared name or a decimal index.
    pub fn resolve(&self, operand: &str) -> Option<usize> {
        self.index_of(operand).or_else(|| operand.parse().ok())
    }

    /// Reports every constraint violation. An empty list means the program
    /// is well formed.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let mut push = |gate, kind| out.push(Violation { gate, kind });
        if self.width == 0 {
            push(None, ViolationKind::ZeroWidth);
        }
        let mut by_index: BTreeMap<usize, &str> = BTreeMap::new();
        for (name, &index) in &self.names {
            if !is_identifier(name) {
                push(None, ViolationKind::InvalidName { name: name.clone() });
            }
            if index >= self.width {
                push(
                    None,
                    ViolationKind::NameOutOfRange {
                        name: name.clone(),
                        index,
                    },
                );
            }
            if let Some(first) = by_index.insert(index, name) {
                push(
                    None,
                    ViolationKind::AliasedIndex {
                        index,
                        first: first.to_string(),
                        second: name.clone(),
                    },
                );
            }
        }
        for (g, gate) in self.gates.iter().enumerate() {
            if gate.targets.is_empty() {
                push(Some(g), ViolationKind::EmptyTargets);
            }
            for &index in gate.controls.union(&gate.targets) {
                if index >= self.width {
                    push(Some(g), ViolationKind::IndexOutOfRange { index });
                }
            }
            for &index in gate.controls.intersection(&gate.targets) {
                push(Some(g), ViolationKind::ControlTargetOverlap { index });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// The same gates in reverse order, names and width unchanged.
    pub fn invert(&self) -> Program {
        Program {
            width: self.width,
            names: self.names.clone(),
            gates: self.gates.iter().rev().cloned().collect(),
        }
    }

    fn operand(&self, index: usize) -> String {
        self.name_of(index)
            .map(str::to_string)
            .unwrap_or_else(|| index.to_string())
    }

    fn operand_list<'a, I>(&self, indices: I) -> String
    where
        I: DoubleEndedIterator<Item = &'a usize>,
    {
        indices
            .rev()
            .map(|&i| self.operand(i))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Canonical text: LF line endings, bit declarations and operands in
    /// descending index order.
    pub fn serialize(&self) -> String {
        let mut out = format!("width {}\n", self.width);
        let mut decls: Vec<(&String, &usize)> = self.names.iter().collect();
        decls.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        for (name, index) in decls {
            out.push_str(&format!("bit {name} {index}\n"));
        }
        for gate in &self.gates {
            let targets = self.operand_list(gate.targets.iter());
            if gate.controls.is_empty() {
                out.push_str(&format!("not {targets}\n"));
            } else {
                let controls = self.operand_list(gate.controls.iter());
                out.push_str(&format!("toggle {targets} when {controls}\n"));
            }
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl FromStr for Program {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Int(&'a str),
    Comma,
}

struct Lexed<'a> {
    tok: Tok<'a>,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> DiagramError {
    DiagramError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(line_no: usize, line: &str) -> Result<Vec<Lexed<'_>>, DiagramError> {
    let bytes = line.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let column = i + 1;
        if c == b' ' || c == b'\t' {
            i += 1;
        } else if c == b',' {
            toks.push(Lexed {
                tok: Tok::Comma,
                column,
            });
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                return Err(syntax(line_no, i + 1, "identifiers may not start with a digit"));
            }
            toks.push(Lexed {
                tok: Tok::Int(&line[start..i]),
                column,
            });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            toks.push(Lexed {
                tok: Tok::Ident(&line[start..i]),
                column,
            });
        } else {
            let ch = line[i..].chars().next().unwrap_or('?');
            return Err(syntax(line_no, column, format!("unexpected character {ch:?}")));
        }
    }
    Ok(toks)
}

struct LineParser<'a, 'b> {
    line: usize,
    toks: &'b [Lexed<'a>],
    pos: usize,
    end_column: usize,
}

impl<'a> LineParser<'a, '_> {
    fn column(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|t| t.column)
            .unwrap_or(self.end_column)
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<&Lexed<'a>> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn err(&self, message: impl Into<String>) -> DiagramError {
        syntax(self.line, self.column(), message)
    }

    fn int(&mut self, what: &str) -> Result<usize, DiagramError> {
        match self.peek() {
            Some(Tok::Int(text)) => {
                let v = text
                    .parse()
                    .map_err(|_| self.err(format!("{what} is too large")))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<&'a str, DiagramError> {
        match self.peek() {
            Some(&Tok::Ident(name)) => {
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn operands(&mut self, names: &BTreeMap<String, usize>) -> Result<Vec<usize>, DiagramError> {
        let mut out = Vec::new();
        loop {
            let column = self.column();
            match self.next().map(|t| t.tok.clone()) {
                Some(Tok::Int(text)) => out.push(
                    text.parse()
                        .map_err(|_| syntax(self.line, column, "index is too large"))?,
                ),
                Some(Tok::Ident(name)) if name != "when" => match names.get(name) {
                    Some(&i) => out.push(i),
                    None => {
                        return Err(syntax(
                            self.line,
                            column,
                            format!("unknown bit name {name:?}"),
                        ))
                    }
                },
                _ => return Err(syntax(self.line, column, "expected bit name or index")),
            }
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }

    fn finish(&self) -> Result<(), DiagramError> {
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(())
    }
}

/// Parses and validates a program.
pub fn parse(text: &str) -> Result<Program, DiagramError> {
    let mut program: Option<Program> = None;
    let mut violations = Vec::new();
    let mut seen_gate = false;

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let code = raw.split('#').next().unwrap_or_default();
        let toks = lex(line_no, code)?;
        let Some(first) = toks.first() else {
            continue;
        };
        let mut p = LineParser {
            line: line_no,
            toks: &toks,
            pos: 1,
            end_column: code.trim_end().len() + 1,
        };
        let keyword = match first.tok {
            Tok::Ident(k) => k,
            _ => return Err(syntax(line_no, first.column, "expected a keyword")),
        };

        if keyword == "width" {
            if program.is_some() {
                return Err(syntax(line_no, first.column, "width declared twice"));
            }
            let width = p.int("width")?;
            p.finish()?;
            program = Some(Program::new(width));
            continue;
        }
        let Some(prog) = program.as_mut() else {
            return Err(syntax(
                line_no,
                first.column,
                "expected `width <w>` before any other statement",
            ));
        };
        match keyword {
            "bit" => {
                if seen_gate {
                    return Err(syntax(
                        line_no,
                        first.column,
                        "bit declarations must precede gates",
                    ));
                }
                let name = p.ident("bit name")?;
                let index = p.int("bit index")?;
                p.finish()?;
                if prog.names.contains_key(name) {
                    violations.push(Violation {
                        gate: None,
                        kind: ViolationKind::DuplicateName {
                            name: name.to_string(),
                        },
                    });
                } else {
                    prog.names.insert(name.to_string(), index);
                }
            }
            "not" => {
                let targets = p.operands(&prog.names)?;
                p.finish()?;
                prog.gates.push(raw_gate([], targets));
                seen_gate = true;
            }
            "toggle" => {
                let targets = p.operands(&prog.names)?;
                let controls = match p.peek() {
                    Some(Tok::Ident("when")) => {
                        p.pos += 1;
                        p.operands(&prog.names)?
                    }
                    None => Vec::new(),
                    _ => return Err(p.err("expected `when` or end of line")),
                };
                p.finish()?;
                prog.gates.push(raw_gate(controls, targets));
                seen_gate = true;
            }
            other => {
                return Err(syntax(
                    line_no,
                    first.column,
                    format!("unknown statement {other:?}"),
                ))
            }
        }
    }

    let program = match program {
        Some(p) => p,
        None => {
            return Err(DiagramError::Validation(vec![Violation {
                gate: None,
                kind: ViolationKind::MissingWidth,
            }]))
        }
    };
    if let Err(more) = program.validate() {
        violations.extend(more);
    }
    if violations.is_empty() {
        Ok(program)
    } else {
        Err(DiagramError::Validation(violations))
    }
}

fn raw_gate<C, T>(controls: C, targets: T) -> Gate
where
    C: IntoIterator<Item = usize>,
    T: IntoIterator<Item = usize>,
{
    Gate {
        controls: controls.into_iter().collect(),
        targets: targets.into_iter().collect(),
    }
}

pub fn serialize(program: &Program) -> String {
    program.serialize()
}

pub fn invert(program: &Program) -> Program {
    program.invert()
}

pub fn validate(program: &Program) -> Result<(), Vec<Violation>> {
    program.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) const KEYWORD_01: &str = "width 3\nbit Num1 2\nbit Num0 1\nbit f 0\nnot Num1\ntoggle f when Num1,Num0\nnot Num1\n";

    fn keyword_01_gates() -> Vec<Gate> {
        vec![
            Gate::not([2]).unwrap(),
            Gate::new([2, 1], [0]).unwrap(),
            Gate::not([2]).unwrap(),
        ]
    }

    #[test]
    fn parses_keyword_program() {
        let p = parse(KEYWORD_01).unwrap();
        assert_eq!(p.width, 3);
        assert_eq!(p.index_of("Num1"), Some(2));
        assert_eq!(p.index_of("f"), Some(0));
        assert_eq!(p.gates, keyword_01_gates());
    }

    #[test]
    fn width_only() {
        let p = parse("width 1\n").unwrap();
        assert_eq!(p.width, 1);
        assert!(p.is_empty());
    }

    #[test]
    fn target_in_controls_rejected() {
        match parse("width 2\ntoggle 0 when 0\n") {
            Err(DiagramError::Validation(v)) => {
                assert_eq!(
                    v,
                    vec![Violation {
                        gate: Some(0),
                        kind: ViolationKind::ControlTargetOverlap { index: 0 }
                    }]
                );
                assert_eq!(v[0].to_string(), "gate 0: target in controls: 0");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn serialize_keyword_program_is_canonical() {
        let p = parse(KEYWORD_01).unwrap();
        assert_eq!(p.serialize(), KEYWORD_01);
    }

    #[test]
    fn serialize_empty_and_unnamed() {
        assert_eq!(Program::new(4).serialize(), "width 4\n");
        let p = Program::with_gates(3, vec![Gate::new([1, 2], [0]).unwrap()]);
        assert_eq!(p.serialize(), "width 3\ntoggle 0 when 2,1\n");
        assert_eq!(parse(&p.serialize()).unwrap(), p);
    }

    #[test]
    fn crlf_comments_and_spacing() {
        let text = "# diagram\r\nwidth 3 # three bits\r\nbit x 2\r\n\r\ntoggle 0 , 1 when x\r\nnot 0,1\r\ntoggle 0\r\n";
        let p = parse(text).unwrap();
        assert_eq!(p.gates.len(), 3);
        assert_eq!(p.gates[0], Gate::new([2], [0, 1]).unwrap());
        assert!(p.gates[2].is_unconditional());
        assert_eq!(
            p.serialize(),
            "width 3\nbit x 2\ntoggle 1,0 when x\nnot 1,0\nnot 0\n"
        );
    }

    #[test]
    fn syntax_errors_report_position() {
        let cases = [
            ("not 1\n", 1, 1),
            ("width 3\nnot Q\n", 2, 5),
            ("width 3\nflip 1\n", 2, 1),
            ("width 3\ntoggle 1 when\n", 2, 14),
            ("width 3\nnot 1 2\n", 2, 7),
            ("width 3\nnot 1;\n", 2, 6),
            ("width 3\nnot 1\nbit a 2\n", 3, 1),
            ("width 3\nwidth 3\n", 2, 1),
            ("width 3\nbit 9a 1\n", 2, 6),
        ];
        for (text, line, column) in cases {
            match parse(text) {
                Err(DiagramError::Syntax {
                    line: l, column: c, ..
                }) => assert_eq!((l, c), (line, column), "{text:?}"),
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn validation_errors() {
        let err = |text: &str| match parse(text) {
            Err(DiagramError::Validation(v)) => v.into_iter().map(|x| x.kind).collect::<Vec<_>>(),
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(err(""), [ViolationKind::MissingWidth]);
        assert_eq!(err("# nothing\n"), [ViolationKind::MissingWidth]);
        assert_eq!(err("width 0\n"), [ViolationKind::ZeroWidth]);
        assert_eq!(
            err("width 2\nnot 2\n"),
            [ViolationKind::IndexOutOfRange { index: 2 }]
        );
        assert_eq!(
            err("width 2\nbit a 0\nbit a 1\n"),
            [ViolationKind::DuplicateName { name: "a".into() }]
        );
        assert_eq!(
            err("width 2\nbit a 0\nbit b 0\n"),
            [ViolationKind::AliasedIndex {
                index: 0,
                first: "a".into(),
                second: "b".into()
            }]
        );
        assert_eq!(
            err("width 2\nbit a 5\n"),
            [ViolationKind::NameOutOfRange {
                name: "a".into(),
                index: 5
            }]
        );
    }

    #[test]
    fn validate_reports_every_violation() {
        let p = Program::with_gates(
            2,
            vec![
                Gate {
                    controls: Default::default(),
                    targets: Default::default(),
                },
                Gate::not([7]).unwrap(),
            ],
        );
        let v = p.validate().unwrap_err();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].to_string(), "gate 0: empty targets");
        assert_eq!(v[1].to_string(), "gate 1: index out of range: 7");
        assert_eq!(parse(KEYWORD_01).unwrap().validate(), Ok(()));
    }

    #[test]
    fn invert_examples() {
        let p = parse(KEYWORD_01).unwrap();
        assert_eq!(p.invert(), p);
        assert_eq!(Program::new(2).invert(), Program::new(2));
        let g = vec![
            Gate::not([0]).unwrap(),
            Gate::new([0], [1]).unwrap(),
            Gate::new([1], [2]).unwrap(),
        ];
        let p = Program::with_gates(3, g.clone());
        let rev: Vec<Gate> = g.into_iter().rev().collect();
        assert_eq!(p.invert().gates, rev);
    }

    fn arb_program() -> impl Strategy<Value = Program> {
        (1usize..12).prop_flat_map(|width| {
            let gate = proptest::collection::vec(any::<Option<bool>>(), width)
                .prop_filter("needs a target", |v| v.contains(&Some(true)))
                .prop_map(|roles| {
                    let mut g = Gate {
                        controls: Default::default(),
                        targets: Default::default(),
                    };
                    for (i, r) in roles.into_iter().enumerate() {
                        match r {
                            Some(true) => {
                                g.targets.insert(i);
                            }
                            Some(false) => {
                                g.controls.insert(i);
                            }
                            None => {}
                        }
                    }
                    g
                });
            let names = proptest::collection::vec(any::<bool>(), width);
            (
                Just(width),
                names,
                proptest::collection::vec(gate, 0..20),
            )
                .prop_map(|(width, named, gates)| {
                    let mut p = Program::with_gates(width, gates);
                    for (i, n) in named.into_iter().enumerate() {
                        if n {
                            p.names.insert(format!("b{i}"), i);
                        }
                    }
                    p
                })
        })
    }

    proptest! {
        #[test]
        fn roundtrip(p in arb_program()) {
            let text = p.serialize();
            let back = parse(&text).unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(back.serialize(), text);
        }

        #[test]
        fn invert_is_involution(p in arb_program()) {
            let inv = p.invert();
            prop_assert_eq!(inv.width, p.width);
            prop_assert_eq!(&inv.names, &p.names);
            prop_assert_eq!(inv.invert(), p);
        }
    }
}
