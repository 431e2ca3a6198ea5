//! Global properties of a truth table.

use super::CompileError;

/// Global properties of an `n`-variable truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GpReport {
    /// Equal numbers of ones and zeros.
    pub balance: bool,
    /// Character `j` (leftmost is level 0, the whole table) is `1` when every
    /// block of size `2^(n-j)` has a bottom half that complements its top half.
    pub antisymmetry_code: String,
    /// As `antisymmetry_code`, with the bottom half equal to the top half.
    pub symmetry_code: String,
    /// Every `p` in `1..=2^(n-1)` with `table[i] == table[i + p]` wherever
    /// both indices are in range, ascending.
    pub periods: Vec<usize>,
}

impl GpReport {
    pub fn variables(&self) -> usize {
        self.antisymmetry_code.len()
    }
}

fn level_code(table: &[bool], n: usize, anti: bool) -> String {
    (0..n)
        .map(|level| {
            let block = table.len() >> level;
            let half = block / 2;
            let holds = table.chunks(block).all(|b| {
                let (top, bottom) = b.split_at(half);
                top.iter().zip(bottom).all(|(t, u)| (t != u) == anti)
            });
            if holds {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Analyzes a truth table whose length is a power of two, at least 2.
pub fn gp_analyze(table: &[bool]) -> Result<GpReport, CompileError> {
    let len = table.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(CompileError::NotPowerOfTwo { len });
    }
    let n = len.trailing_zeros() as usize;
    let ones = table.iter().filter(|&&b| b).count();
    let periods = (1..=len / 2)
        .filter(|&p| (0..len - p).all(|i| table[i] == table[i + p]))
        .collect();
    Ok(GpReport {
        balance: 2 * ones == len,
        antisymmetry_code: level_code(table, n, true),
        symmetry_code: level_code(table, n, false),
        periods,
    })
}
