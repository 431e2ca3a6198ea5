//! The word-array engine.
//!
//! A [`WordArray`] holds `L` words of equal width. Every [`Gate`] is applied
//! to all words in lockstep: an unlocked word whose control bits are all true
//! has every target bit complemented. Locked words ignore gates and drop out
//! of bus activity, which the [`EventCounters`] record.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::bits::{BitString, BitsError};
use crate::diagram::Program;

/// Arrays at least this long are stepped with rayon.
const PARALLEL_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("pattern {index} has {found} bits, expected {expected}")]
    WidthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("program width {program} exceeds array width {array}")]
    ProgramTooWide { program: usize, array: usize },
    #[error("a word array needs at least one word")]
    EmptyArray,
    #[error("width must be positive")]
    ZeroWidth,
    #[error("bit index {index} out of range for width {width}")]
    IndexOutOfRange { index: usize, width: usize },
    #[error("bit {index} is both a control and a target")]
    OverlappingControlsTargets { index: usize },
    #[error("gate has no targets")]
    EmptyTargets,
    #[error("locked word {word} would have changed had it been unlocked")]
    LockViolation { word: usize },
    #[error("invalid pattern {index}: {source}")]
    InvalidPattern { index: usize, source: BitsError },
}

/// One lockstep step: complement `targets` wherever all `controls` are true.
///
/// An empty control set is the unconditional NOT; the constant-true REF cell
/// is implied.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub controls: BTreeSet<usize>,
    pub targets: BTreeSet<usize>,
}

impl Gate {
    /// A controlled NOT. Rejects empty or overlapping target sets.
    pub fn new<C, T>(controls: C, targets: T) -> Result<Self, EngineError>
    where
        C: IntoIterator<Item = usize>,
        T: IntoIterator<Item = usize>,
    {
        let gate = Gate {
            controls: controls.into_iter().collect(),
            targets: targets.into_iter().collect(),
        };
        gate.check_shape()?;
        Ok(gate)
    }

    /// An unconditional NOT on `targets`.
    pub fn not<T: IntoIterator<Item = usize>>(targets: T) -> Result<Self, EngineError> {
        Self::new([], targets)
    }

    pub fn is_unconditional(&self) -> bool {
        self.controls.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.controls.iter().chain(self.targets.iter()).max().copied()
    }

    fn check_shape(&self) -> Result<(), EngineError> {
        if self.targets.is_empty() {
            return Err(EngineError::EmptyTargets);
        }
        if let Some(&index) = self.controls.intersection(&self.targets).next() {
            return Err(EngineError::OverlappingControlsTargets { index });
        }
        Ok(())
    }

    /// Checks the gate against an array of the given width.
    pub fn check(&self, width: usize) -> Result<(), EngineError> {
        self.check_shape()?;
        if let Some(index) = self.max_index().filter(|&i| i >= width) {
            return Err(EngineError::IndexOutOfRange { index, width });
        }
        Ok(())
    }

    fn masks(&self, width: usize) -> (BitString, BitString) {
        (
            BitString::from_indices(width, self.controls.iter().copied()),
            BitString::from_indices(width, self.targets.iter().copied()),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EventCounters {
    /// Gates applied.
    pub steps: u64,
    /// (word, step) pairs where the word was unlocked and every control was true.
    pub bus_activations: u64,
    /// Individual bit complements.
    pub toggles: u64,
    /// (word, step) pairs skipped because the word was locked.
    pub locked_savings: u64,
}

/// Which words [`WordArray::lock_where`] disables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LockSense {
    /// Lock words whose control bits are all true.
    Match,
    /// Lock words lacking at least one true control bit.
    Mismatch,
}

/// One address register with its lock cell and an opaque payload id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    bits: BitString,
    locked: bool,
    payload: Option<u64>,
    // Evolves as if the word were unlocked; only kept while verifying locks.
    shadow: Option<BitString>,
}

impl Word {
    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn is_locked(&self) -> bool {
        self.locked
    }

    pub fn payload(&self) -> Option<u64> {
        self.payload
    }

    /// Returns (activated, was_locked).
    #[inline]
    fn step(&mut self, controls: &BitString, targets: &BitString) -> (bool, bool) {
        if self.locked {
            if let Some(shadow) = self.shadow.as_mut() {
                if shadow.contains_all(controls) {
                    shadow.xor_assign(targets);
                }
            }
            return (false, true);
        }
        if self.bits.contains_all(controls) {
            self.bits.xor_assign(targets);
            (true, false)
        } else {
            (false, false)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordArray {
    words: Vec<Word>,
    width: usize,
    counters: EventCounters,
    verify_locks: bool,
}

impl WordArray {
    /// Builds an array from bit patterns, all unlocked, counters zeroed.
    pub fn new<I>(patterns: I, width: usize) -> Result<Self, EngineError>
    where
        I: IntoIterator<Item = BitString>,
    {
        Self::with_payloads(patterns.into_iter().map(|p| (p, None)), width)
    }

    pub fn with_payloads<I>(entries: I, width: usize) -> Result<Self, EngineError>
    where
        I: IntoIterator<Item = (BitString, Option<u64>)>,
    {
        if width == 0 {
            return Err(EngineError::ZeroWidth);
        }
        let words = entries
            .into_iter()
            .enumerate()
            .map(|(index, (bits, payload))| {
                if bits.width() != width {
                    return Err(EngineError::WidthMismatch {
                        index,
                        expected: width,
                        found: bits.width(),
                    });
                }
                Ok(Word {
                    bits,
                    locked: false,
                    payload,
                    shadow: None,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if words.is_empty() {
            return Err(EngineError::EmptyArray);
        }
        Ok(WordArray {
            words,
            width,
            counters: EventCounters::default(),
            verify_locks: false,
        })
    }

    /// Parses textual patterns (highest index first) into an array.
    pub fn from_strs<S: AsRef<str>>(patterns: &[S], width: usize) -> Result<Self, EngineError> {
        let bits = patterns
            .iter()
            .enumerate()
            .map(|(index, s)| {
                s.as_ref()
                    .parse::<BitString>()
                    .map_err(|source| EngineError::InvalidPattern { index, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(bits, width)
    }

    /// The full binary count over `address_bits`, with `flag_bits` zeroed
    /// low-order bits appended. Word `i` holds address `i`.
    pub fn binary_count(address_bits: usize, flag_bits: usize) -> Result<Self, EngineError> {
        let width = address_bits + flag_bits;
        assert!(
            address_bits < 64 && width <= 64,
            "binary count limited to 64-bit words"
        );
        Self::new(
            (0..1u64 << address_bits).map(|i| BitString::from_u64(width, i << flag_bits)),
            width,
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, index: usize) -> &Word {
        &self.words[index]
    }

    pub fn patterns(&self) -> impl DoubleEndedIterator<Item = &BitString> + ExactSizeIterator {
        self.words.iter().map(|w| &w.bits)
    }

    pub fn counters(&self) -> EventCounters {
        self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = EventCounters::default();
    }

    pub fn active_count(&self) -> usize {
        self.words.iter().filter(|w| !w.locked).count()
    }

    pub fn locked_count(&self) -> usize {
        self.len() - self.active_count()
    }

    /// Enables shadow simulation of locked words.
    ///
    /// While enabled, every locked word tracks the bits it would hold had it
    /// stayed unlocked; a gate or program that leaves a locked word's shadow
    /// different from its real bits fails with [`EngineError::LockViolation`].
    /// The check runs after the whole gate or program, so unlocked words are
    /// already updated when the error is returned.
    pub fn set_verify_locks(&mut self, enabled: bool) {
        self.verify_locks = enabled;
        for word in &mut self.words {
            word.shadow = (enabled && word.locked).then(|| word.bits.clone());
        }
    }

    pub fn verify_locks(&self) -> bool {
        self.verify_locks
    }

    fn check_index(&self, index: usize) -> Result<(), EngineError> {
        if index >= self.width {
            return Err(EngineError::IndexOutOfRange {
                index,
                width: self.width,
            });
        }
        Ok(())
    }

    fn step(&mut self, gate: &Gate) {
        let (controls, targets) = gate.masks(self.width);
        let (activations, locked) = if self.words.len() >= PARALLEL_THRESHOLD {
            self.words
                .par_iter_mut()
                .map(|w| {
                    let (hit, skip) = w.step(&controls, &targets);
                    (hit as u64, skip as u64)
                })
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
        } else {
            self.words.iter_mut().fold((0, 0), |acc, w| {
                let (hit, skip) = w.step(&controls, &targets);
                (acc.0 + hit as u64, acc.1 + skip as u64)
            })
        };
        self.counters.steps += 1;
        self.counters.bus_activations += activations;
        self.counters.toggles += activations * gate.targets.len() as u64;
        self.counters.locked_savings += locked;
    }

    fn check_shadows(&self) -> Result<(), EngineError> {
        if !self.verify_locks {
            return Ok(());
        }
        match self
            .words
            .iter()
            .position(|w| w.shadow.as_ref().is_some_and(|s| *s != w.bits))
        {
            Some(word) => Err(EngineError::LockViolation { word }),
            None => Ok(()),
        }
    }

    fn check_program(&self, program: &Program) -> Result<(), EngineError> {
        if program.width > self.width {
            return Err(EngineError::ProgramTooWide {
                program: program.width,
                array: self.width,
            });
        }
        program.gates.iter().try_for_each(|g| g.check(self.width))
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), EngineError> {
        gate.check(self.width)?;
        self.step(gate);
        self.check_shadows()
    }

    /// Applies every gate of `program` in order.
    ///
    /// All gates are validated before the first one runs.
    pub fn apply_program(&mut self, program: &Program) -> Result<(), EngineError> {
        self.apply_program_traced(program, |_, _| {})
    }

    /// Like [`apply_program`](Self::apply_program), calling `observe` after
    /// each step with the step index and the array state.
    pub fn apply_program_traced<F>(&mut self, program: &Program, mut observe: F) -> Result<(), EngineError>
    where
        F: FnMut(usize, &WordArray),
    {
        self.check_program(program)?;
        for (i, gate) in program.gates.iter().enumerate() {
            self.step(gate);
            observe(i, self);
        }
        self.check_shadows()
    }

    /// Runs `program` backwards. Each gate is its own inverse, so this undoes
    /// [`apply_program`](Self::apply_program) provided no lock changed in
    /// between.
    pub fn apply_inverse(&mut self, program: &Program) -> Result<(), EngineError> {
        self.check_program(program)?;
        for gate in program.gates.iter().rev() {
            self.step(gate);
        }
        self.check_shadows()
    }

    /// The chosen bit of every word, in word order.
    pub fn read_flags(&self, bit: usize) -> Result<Vec<bool>, EngineError> {
        self.check_index(bit)?;
        Ok(self.words.iter().map(|w| w.bits.get(bit)).collect())
    }

    /// Indices of words with `bit` set, in priority-scan (ascending) order.
    pub fn locate_flags(&self, bit: usize) -> Result<Vec<usize>, EngineError> {
        self.check_index(bit)?;
        Ok(self
            .words
            .iter()
            .enumerate()
            .filter(|(_, w)| w.bits.get(bit))
            .map(|(i, _)| i)
            .collect())
    }

    /// Locks words according to whether all `controls` are true.
    /// Returns how many words were newly locked.
    pub fn lock_where<I>(&mut self, controls: I, sense: LockSense) -> Result<usize, EngineError>
    where
        I: IntoIterator<Item = usize>,
    {
        let controls: Vec<usize> = controls.into_iter().collect();
        for &c in &controls {
            self.check_index(c)?;
        }
        let mask = BitString::from_indices(self.width, controls);
        let verify = self.verify_locks;
        let mut newly = 0;
        for word in self.words.iter_mut().filter(|w| !w.locked) {
            let matches = word.bits.contains_all(&mask);
            let lock = match sense {
                LockSense::Match => matches,
                LockSense::Mismatch => !matches,
            };
            if lock {
                word.locked = true;
                if verify {
                    word.shadow = Some(word.bits.clone());
                }
                newly += 1;
            }
        }
        Ok(newly)
    }

    pub fn unlock_all(&mut self) {
        for word in &mut self.words {
            word.locked = false;
            word.shadow = None;
        }
    }
}
