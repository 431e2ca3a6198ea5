//! Compilers from search and satisfiability problems to address diagrams.
//!
//! Every compiled program toggles a single flag bit. A word whose flag starts
//! at zero ends with the flag equal to the predicate evaluated on its own
//! bits; every other bit is restored.
//!
//! Formula variables follow one address convention throughout: with `n`
//! variables in natural order, variable `i` lives at word bit `n - i` and the
//! flag at bit 0. On the full binary count, word `a` then holds address `a`
//! with the first variable most significant.

mod esop;
mod formula;
mod gp;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::Program;
use crate::engine::{EngineError, Gate, WordArray};

pub use esop::{esop_expand, eval_esop, Cube};
pub use formula::{natural_cmp, Formula, FormulaSyntaxError};
pub use gp::{gp_analyze, GpReport};

/// Variable name to word bit index.
pub type VarMap = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("unbound variable {0:?}")]
    UnboundVariable(String),
    #[error("flag bit {flag} is also the bit of variable {variable:?}")]
    FlagCollision { flag: usize, variable: String },
    #[error("flag bit {flag} is one of the key bits")]
    FlagInKeyBits { flag: usize },
    #[error("key bit {index} listed twice")]
    DuplicateKeyBit { index: usize },
    #[error("keyword has {keyword} bits but {key_bits} key bits were given")]
    KeywordLength { keyword: usize, key_bits: usize },
    #[error("keyword character {ch:?} at column {column} is not 0 or 1")]
    InvalidKeyword { column: usize, ch: char },
    #[error("truth table length {len} is not a power of two >= 2")]
    NotPowerOfTwo { len: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Lowers cubes over word bits to gates toggling `flag`.
///
/// Each cube becomes one controlled NOT on `flag`, with its negative literals
/// complemented beforehand and restored afterwards by unconditional NOTs.
/// A restoring NOT and the next cube's complementing NOT are merged into one
/// step over their symmetric difference, and dropped when that is empty.
pub fn lower_cubes(cubes: &[Cube], flag: usize) -> Vec<Gate> {
    let mut gates = Vec::new();
    let mut pending: BTreeSet<usize> = BTreeSet::new();
    for cube in cubes {
        let wrap: BTreeSet<usize> = pending
            .symmetric_difference(&cube.negative)
            .copied()
            .collect();
        if !wrap.is_empty() {
            gates.push(Gate {
                controls: BTreeSet::new(),
                targets: wrap,
            });
        }
        gates.push(Gate {
            controls: cube.positive.union(&cube.negative).copied().collect(),
            targets: BTreeSet::from([flag]),
        });
        pending = cube.negative.clone();
    }
    if !pending.is_empty() {
        gates.push(Gate {
            controls: BTreeSet::new(),
            targets: pending,
        });
    }
    gates
}

fn program_for(gates: Vec<Gate>, flag: usize) -> Program {
    let width = gates
        .iter()
        .filter_map(Gate::max_index)
        .chain([flag])
        .max()
        .unwrap_or(0)
        + 1;
    Program::with_gates(width, gates)
}

/// Flags words whose `key_bits` spell `keyword`.
///
/// `keyword` character `j` is matched against word bit `key_bits[j]`. The
/// result has at most three steps whatever the keyword length.
pub fn compile_keyword(keyword: &str, key_bits: &[usize], flag: usize) -> Result<Program, CompileError> {
    let chars: Vec<char> = keyword.chars().collect();
    if chars.len() != key_bits.len() {
        return Err(CompileError::KeywordLength {
            keyword: chars.len(),
            key_bits: key_bits.len(),
        });
    }
    let mut seen = BTreeSet::new();
    let mut cube = Cube::default();
    for (column, (&ch, &bit)) in chars.iter().zip(key_bits).enumerate() {
        if bit == flag {
            return Err(CompileError::FlagInKeyBits { flag });
        }
        if !seen.insert(bit) {
            return Err(CompileError::DuplicateKeyBit { index: bit });
        }
        match ch {
            '1' => cube.positive.insert(bit),
            '0' => cube.negative.insert(bit),
            _ => {
                return Err(CompileError::InvalidKeyword {
                    column: column + 1,
                    ch,
                })
            }
        };
    }
    Ok(program_for(lower_cubes(&[cube], flag), flag))
}

/// Flags words satisfying `formula`, one controlled NOT per Reed-Muller cube.
pub fn compile_formula(formula: &Formula, var_map: &VarMap, flag: usize) -> Result<Program, CompileError> {
    let vars = formula.variables();
    let mut bits = Vec::with_capacity(vars.len());
    for name in &vars {
        let bit = *var_map
            .get(name)
            .ok_or_else(|| CompileError::UnboundVariable(name.clone()))?;
        if bit == flag {
            return Err(CompileError::FlagCollision {
                flag,
                variable: name.clone(),
            });
        }
        bits.push(bit);
    }
    let cubes: Vec<Cube> = esop_expand(formula)
        .into_iter()
        .map(|c| Cube {
            positive: c.positive.iter().map(|&i| bits[i]).collect(),
            negative: c.negative.iter().map(|&i| bits[i]).collect(),
        })
        .collect();
    Ok(program_for(lower_cubes(&cubes, flag), flag))
}

/// The conventional map for `n` variables: `i`-th variable in natural order
/// at bit `n - i`, leaving bit 0 for the flag.
pub fn address_var_map(formula: &Formula, n: usize) -> Result<VarMap, CompileError> {
    let vars = formula.variables();
    if let Some(extra) = vars.get(n) {
        return Err(CompileError::UnboundVariable(extra.clone()));
    }
    Ok(vars
        .into_iter()
        .enumerate()
        .map(|(i, name)| (name, n - i))
        .collect())
}

/// Outcome of running a compiled formula over the full binary count.
#[derive(Debug, Clone)]
pub struct CountRun {
    pub program: Program,
    pub array: WordArray,
    /// Flag of word `a` (address `a`), ascending.
    pub table: Vec<bool>,
}

impl CountRun {
    /// Satisfying addresses, ascending. Empty means unsatisfiable.
    pub fn solutions(&self) -> Vec<usize> {
        self.array
            .locate_flags(0)
            .expect("flag bit 0 always exists")
    }
}

/// Compiles `formula` over `n` variables and runs it on the `2^n` count
/// with a zeroed flag bit.
pub fn run_on_count(formula: &Formula, n: usize) -> Result<CountRun, CompileError> {
    let map = address_var_map(formula, n)?;
    let mut program = compile_formula(formula, &map, 0)?;
    program.width = n + 1;
    let mut array = WordArray::binary_count(n, 1)?;
    array.apply_program(&program)?;
    let table = array.read_flags(0)?;
    Ok(CountRun {
        program,
        array,
        table,
    })
}

/// Global properties of `formula` read off the flag bits of the word array.
pub fn run_gp(formula: &Formula, n: usize) -> Result<GpReport, CompileError> {
    gp_analyze(&run_on_count(formula, n)?.table)
}

/// Evaluates the expression tree directly on every assignment, in address
/// order. This is the classical oracle for the compiled programs.
pub fn brute_force_table(formula: &Formula, n: usize) -> Result<Vec<bool>, CompileError> {
    let vars = formula.variables();
    if let Some(extra) = vars.get(n) {
        return Err(CompileError::UnboundVariable(extra.clone()));
    }
    let indexed = formula
        .index(&|name| vars.iter().position(|v| v == name))
        .map_err(CompileError::UnboundVariable)?;
    let eval = |addr: usize| indexed.eval(&|i| (addr >> (n - 1 - i)) & 1 == 1);
    let len = 1usize << n;
    Ok(if len >= 1 << 14 {
        (0..len).into_par_iter().map(eval).collect()
    } else {
        (0..len).map(eval).collect()
    })
}
