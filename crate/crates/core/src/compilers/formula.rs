//! Boolean formulas and their text syntax.
//!
//! Operators are `!`, `&`, `^` and `|`, binding in that order from tightest
//! to loosest. Identifiers are variables, `0` and `1` are constants.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct FormulaSyntaxError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Const(bool),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Xor(Vec<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not(Box::new(inner))
    }

    pub fn and(terms: impl IntoIterator<Item = Formula>) -> Self {
        Formula::And(terms.into_iter().collect())
    }

    pub fn or(terms: impl IntoIterator<Item = Formula>) -> Self {
        Formula::Or(terms.into_iter().collect())
    }

    pub fn xor(terms: impl IntoIterator<Item = Formula>) -> Self {
        Formula::Xor(terms.into_iter().collect())
    }

    /// Distinct variable names in natural order (`x2` sorts before `x10`).
    pub fn variables(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        self.collect_vars(&mut set);
        let mut vars: Vec<String> = set.into_iter().map(str::to_string).collect();
        vars.sort_by(|a, b| natural_cmp(a, b));
        vars
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Var(name) => {
                out.insert(name);
            }
            Formula::Const(_) => {}
            Formula::Not(inner) => inner.collect_vars(out),
            Formula::And(ts) | Formula::Or(ts) | Formula::Xor(ts) => {
                ts.iter().for_each(|t| t.collect_vars(out))
            }
        }
    }

    /// Evaluates with `value` supplying each variable.
    pub fn eval<F: Fn(&str) -> bool>(&self, value: &F) -> bool {
        match self {
            Formula::Var(name) => value(name),
            Formula::Const(c) => *c,
            Formula::Not(inner) => !inner.eval(value),
            Formula::And(ts) => ts.iter().all(|t| t.eval(value)),
            Formula::Or(ts) => ts.iter().any(|t| t.eval(value)),
            Formula::Xor(ts) => ts.iter().fold(false, |acc, t| acc ^ t.eval(value)),
        }
    }

    /// Replaces variable names by indices. Returns the first unbound name on
    /// failure.
    pub(crate) fn index<F>(&self, lookup: &F) -> Result<Indexed, String>
    where
        F: Fn(&str) -> Option<usize>,
    {
        let all = |ts: &[Formula]| ts.iter().map(|t| t.index(lookup)).collect::<Result<Vec<_>, _>>();
        Ok(match self {
            Formula::Var(name) => Indexed::Var(lookup(name).ok_or_else(|| name.clone())?),
            Formula::Const(c) => Indexed::Const(*c),
            Formula::Not(inner) => Indexed::Not(Box::new(inner.index(lookup)?)),
            Formula::And(ts) => Indexed::And(all(ts)?),
            Formula::Or(ts) => Indexed::Or(all(ts)?),
            Formula::Xor(ts) => Indexed::Xor(all(ts)?),
        })
    }
}

/// A formula whose variables are positions.
#[derive(Debug, Clone)]
pub(crate) enum Indexed {
    Var(usize),
    Const(bool),
    Not(Box<Indexed>),
    And(Vec<Indexed>),
    Or(Vec<Indexed>),
    Xor(Vec<Indexed>),
}

impl Indexed {
    pub(crate) fn eval<F: Fn(usize) -> bool>(&self, value: &F) -> bool {
        match self {
            Indexed::Var(i) => value(*i),
            Indexed::Const(c) => *c,
            Indexed::Not(inner) => !inner.eval(value),
            Indexed::And(ts) => ts.iter().all(|t| t.eval(value)),
            Indexed::Or(ts) => ts.iter().any(|t| t.eval(value)),
            Indexed::Xor(ts) => ts.iter().fold(false, |acc, t| acc ^ t.eval(value)),
        }
    }
}

/// Orders names by non-digit prefix, then numeric suffix.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u128>) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, digits) = s.split_at(cut);
        (head, digits.parse().ok())
    }
    let (ha, na) = split(a);
    let (hb, nb) = split(b);
    ha.cmp(hb).then(na.cmp(&nb)).then(a.cmp(b))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, ts: &[Formula], op: &str, empty: &str) -> fmt::Result {
            if ts.is_empty() {
                return f.write_str(empty);
            }
            f.write_str("(")?;
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")
        }
        match self {
            Formula::Var(name) => f.write_str(name),
            Formula::Const(c) => f.write_str(if *c { "1" } else { "0" }),
            Formula::Not(inner) => write!(f, "!{inner}"),
            Formula::And(ts) => list(f, ts, "&", "1"),
            Formula::Or(ts) => list(f, ts, "|", "0"),
            Formula::Xor(ts) => list(f, ts, "^", "0"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err(&self, message: impl Into<String>) -> FormulaSyntaxError {
        FormulaSyntaxError {
            column: self.src[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn binary(
        &mut self,
        op: char,
        build: fn(Vec<Formula>) -> Formula,
        next: fn(&mut Self) -> Result<Formula, FormulaSyntaxError>,
    ) -> Result<Formula, FormulaSyntaxError> {
        let mut terms = vec![next(self)?];
        while self.peek() == Some(op) {
            self.pos += 1;
            terms.push(next(self)?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            build(terms)
        })
    }

    fn or(&mut self) -> Result<Formula, FormulaSyntaxError> {
        self.binary('|', Formula::Or, Self::xor)
    }

    fn xor(&mut self) -> Result<Formula, FormulaSyntaxError> {
        self.binary('^', Formula::Xor, Self::and)
    }

    fn and(&mut self) -> Result<Formula, FormulaSyntaxError> {
        self.binary('&', Formula::And, Self::unary)
    }

    fn unary(&mut self) -> Result<Formula, FormulaSyntaxError> {
        if self.peek() == Some('!') {
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, FormulaSyntaxError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.or()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    "0" => Ok(Formula::Const(false)),
                    "1" => Ok(Formula::Const(true)),
                    _ => {
                        self.pos = start;
                        Err(self.err("constants are 0 or 1"))
                    }
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                Ok(Formula::Var(self.src[start..self.pos].to_string()))
            }
            Some(c) => Err(self.err(format!("unexpected {c:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

impl FromStr for Formula {
    type Err = FormulaSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let f = p.or()?;
        if p.peek().is_some() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(f)
    }
}
