//! A reference CAM that performs a controlled NOT the conventional way:
//! mask and match to set tags, then read, complement and write back each
//! tagged row from the top down.

use crate::bits::BitString;
use crate::engine::{EngineError, Gate, WordArray};
use crate::scalar::Scalar;

use super::CostParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CamCounters {
    /// Controlled NOTs performed.
    pub procedures: u64,
    /// Read-complement-write cycles, one per tagged row.
    pub cam_cycles: u64,
    pub multi_reads: u64,
    pub multi_writes: u64,
    /// Controller-to-rows and rows-to-controller line activations.
    pub vertical_signals: u64,
    /// Rows-to-tags line activations.
    pub horizontal_signals: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CamState {
    rows: Vec<BitString>,
    masks: BitString,
    tags: Vec<bool>,
    width: usize,
    counters: CamCounters,
}

impl CamState {
    pub fn new(rows: Vec<BitString>, width: usize) -> Result<Self, EngineError> {
        if width == 0 {
            return Err(EngineError::ZeroWidth);
        }
        if rows.is_empty() {
            return Err(EngineError::EmptyArray);
        }
        if let Some((index, r)) = rows.iter().enumerate().find(|(_, r)| r.width() != width) {
            return Err(EngineError::WidthMismatch {
                index,
                expected: width,
                found: r.width(),
            });
        }
        Ok(CamState {
            tags: vec![false; rows.len()],
            masks: BitString::zeros(width),
            rows,
            width,
            counters: CamCounters::default(),
        })
    }

    /// Loads the word contents of `array`; lock state is ignored.
    pub fn from_array(array: &WordArray) -> Self {
        Self::new(array.patterns().cloned().collect(), array.width())
            .expect("arrays are non-empty with uniform width")
    }

    pub fn rows(&self) -> &[BitString] {
        &self.rows
    }

    pub fn tags(&self) -> &[bool] {
        &self.tags
    }

    pub fn masks(&self) -> &BitString {
        &self.masks
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn counters(&self) -> CamCounters {
        self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = CamCounters::default();
    }

    /// Time charged so far: `Δ1 + Δ2` per procedure plus `2 Δ1` per cycle.
    pub fn elapsed_time<T: Scalar>(&self, params: &CostParams<T>) -> T {
        let c = &self.counters;
        T::from_count(c.procedures) * (params.delta1.clone() + params.delta2.clone())
            + T::two() * params.delta1.clone() * T::from_count(c.cam_cycles)
    }

    /// Power charged so far: `P1` per vertical and `P2` per horizontal signal.
    pub fn consumed_power<T: Scalar>(&self, params: &CostParams<T>) -> T {
        let c = &self.counters;
        params.p1.clone() * T::from_count(c.vertical_signals)
            + params.p2.clone() * T::from_count(c.horizontal_signals)
    }

    pub fn controlled_not(&mut self, gate: &Gate) -> Result<(), EngineError> {
        gate.check(self.width)?;
        let n = (self.width - 1) as u64;
        let targets = BitString::from_indices(self.width, gate.targets.iter().copied());

        // Step 1: reset tags and masks, mask the tested bits, drive data high.
        self.tags.iter_mut().for_each(|t| *t = false);
        self.masks = BitString::from_indices(self.width, gate.controls.iter().copied());
        self.counters.vertical_signals += n + 2;

        // Step 2: every row matches in parallel and sets its tag.
        for (tag, row) in self.tags.iter_mut().zip(&self.rows) {
            *tag = row.contains_all(&self.masks);
        }
        self.counters.horizontal_signals += self.rows.len() as u64;

        // Step 3: resolve tags top-down, one round trip per match.
        for (tag, row) in self.tags.iter_mut().zip(self.rows.iter_mut()) {
            if !*tag {
                continue;
            }
            let mut data = row.clone();
            self.counters.multi_reads += 1;
            data.xor_assign(&targets);
            *row = data;
            self.counters.multi_writes += 1;
            *tag = false;
            self.counters.vertical_signals += 2 * n;
            self.counters.cam_cycles += 1;
        }
        self.counters.procedures += 1;
        Ok(())
    }
}

pub fn cam_controlled_not(state: &mut CamState, gate: &Gate) -> Result<(), EngineError> {
    state.controlled_not(gate)
}
