//! Delay and power of one controlled NOT on the word array versus a
//! conventional CAM that emulates it with match, multi-read and multi-write
//! cycles.
//!
//! Rows carry `n + 1` bits. With match fraction `f`, a full binary count has
//! `f * 2^(n+1)` matching rows, and the CAM pays one read-back-and-write
//! cycle for each:
//!
//! | side | time | power |
//! |------|------|-------|
//! | CAM  | `Δ1 + Δ2 + 2 f Δ1 2^(n+1)` | `P1 n + P2 L + 2 f P1 n 2^(n+1)` |
//! | RSVP | `Δ1 + Δ2` | `P1 n + P2 L_active` |
//!
//! All functions are generic over [`Scalar`], so the same formulas can be
//! evaluated in floating point or exactly in rationals.

mod cam;

pub use cam::{cam_controlled_not, CamCounters, CamState};

use num_traits::Float;
use thiserror::Error;

use crate::diagram::Program;
use crate::engine::{EngineError, Gate, WordArray};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("{0} must be strictly positive")]
    NonPositive(&'static str),
    #[error("{0} must lie in [0, 1]")]
    OutOfUnitRange(&'static str),
    #[error("RSVP side has zero {0}; ratio undefined")]
    ZeroBaseline(&'static str),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Signal-traversal times and per-line powers.
#[derive(Debug, Clone, PartialEq)]
pub struct CostParams<T> {
    /// Controller to rows (and back).
    pub delta1: T,
    /// Rows to tags.
    pub delta2: T,
    /// Power per vertical line.
    pub p1: T,
    /// Power per horizontal line.
    pub p2: T,
}

impl<T: Scalar> CostParams<T> {
    pub fn new(delta1: T, delta2: T, p1: T, p2: T) -> Result<Self, CostError> {
        for (value, name) in [(&delta1, "delta1"), (&delta2, "delta2"), (&p1, "p1"), (&p2, "p2")] {
            if *value <= T::zero() {
                return Err(CostError::NonPositive(name));
            }
        }
        Ok(CostParams {
            delta1,
            delta2,
            p1,
            p2,
        })
    }

    pub fn unit() -> Self {
        CostParams {
            delta1: T::one(),
            delta2: T::one(),
            p1: T::one(),
            p2: T::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport<T> {
    pub match_fraction: T,
    pub cam_time: T,
    pub rsvp_time: T,
    pub cam_power: T,
    pub rsvp_power: T,
    pub cam_pdp: T,
    pub rsvp_pdp: T,
    pub time_ratio: T,
    pub power_ratio: T,
    pub pdp_ratio: T,
}

/// Fraction of a full binary count whose controls are all true: `2^-c`.
pub fn match_fraction<T: Scalar>(gate: &Gate, width: usize) -> Result<T, EngineError> {
    gate.check(width)?;
    Ok(T::one() / T::pow2(gate.controls.len() as u32))
}

/// Fraction of the array's words whose controls are all true, ignoring locks.
pub fn empirical_match_fraction<T: Scalar>(array: &WordArray, gate: &Gate) -> Result<T, EngineError> {
    gate.check(array.width())?;
    let matches = array
        .patterns()
        .filter(|bits| gate.controls.iter().all(|&c| bits.get(c)))
        .count();
    Ok(T::from_count(matches as u64) / T::from_count(array.len() as u64))
}

/// `Δ1 + Δ2 + 2 f Δ1 2^(n+1)` for `f` in `[0, 1]`.
pub fn cam_time<T: Scalar>(params: &CostParams<T>, f: &T, n: u32) -> T {
    let cycles = T::two() * f.clone() * params.delta1.clone() * T::pow2(n + 1);
    params.delta1.clone() + params.delta2.clone() + cycles
}

/// `Δ1 + Δ2`, independent of word count, width and match fraction.
pub fn rsvp_time<T: Scalar>(params: &CostParams<T>) -> T {
    params.delta1.clone() + params.delta2.clone()
}

/// `P1 n + P2 L + 2 f P1 n 2^(n+1)`.
pub fn cam_power<T: Scalar>(params: &CostParams<T>, f: &T, n: u32, words: u64) -> T {
    let n_t = T::from_count(n as u64);
    let cycles = T::two() * f.clone() * params.p1.clone() * n_t.clone() * T::pow2(n + 1);
    params.p1.clone() * n_t + params.p2.clone() * T::from_count(words) + cycles
}

/// Same as [`cam_power`] with `e^(n+1)` in the cycle term in place of
/// `2^(n+1)`.
pub fn cam_power_literal_e<T: Scalar + Float>(params: &CostParams<T>, f: T, n: u32, words: u64) -> T {
    let n_t = T::from_count(n as u64);
    let exp = T::from_count(n as u64 + 1).exp();
    params.p1 * n_t + params.p2 * T::from_count(words) + T::two() * f * params.p1 * n_t * exp
}

/// `P1 n + P2 L_active`; locked words drop out of the horizontal term.
pub fn rsvp_power<T: Scalar>(params: &CostParams<T>, n: u32, active_words: u64) -> T {
    rsvp_power_fractional(params, n, &T::from_count(active_words))
}

fn rsvp_power_fractional<T: Scalar>(params: &CostParams<T>, n: u32, active: &T) -> T {
    params.p1.clone() * T::from_count(n as u64) + params.p2.clone() * active.clone()
}

fn check_unit<T: Scalar>(value: &T, name: &'static str) -> Result<(), CostError> {
    if *value < T::zero() || *value > T::one() {
        return Err(CostError::OutOfUnitRange(name));
    }
    Ok(())
}

fn assemble<T: Scalar>(f: T, cam_time: T, rsvp_time: T, cam_power: T, rsvp_power: T) -> Result<CostReport<T>, CostError> {
    if rsvp_time == T::zero() {
        return Err(CostError::ZeroBaseline("time"));
    }
    if rsvp_power == T::zero() {
        return Err(CostError::ZeroBaseline("power"));
    }
    let cam_pdp = cam_time.clone() * cam_power.clone();
    let rsvp_pdp = rsvp_time.clone() * rsvp_power.clone();
    Ok(CostReport {
        match_fraction: f,
        time_ratio: cam_time.clone() / rsvp_time.clone(),
        power_ratio: cam_power.clone() / rsvp_power.clone(),
        pdp_ratio: cam_pdp.clone() / rsvp_pdp.clone(),
        cam_time,
        rsvp_time,
        cam_power,
        rsvp_power,
        cam_pdp,
        rsvp_pdp,
    })
}

/// Both sides for an explicit match fraction. `lock_fraction` of the `words`
/// are locked on the RSVP side.
pub fn compare_with_fraction<T: Scalar>(
    params: &CostParams<T>,
    f: T,
    n: u32,
    words: u64,
    lock_fraction: &T,
) -> Result<CostReport<T>, CostError> {
    check_unit(&f, "match fraction")?;
    check_unit(lock_fraction, "lock fraction")?;
    let active = T::from_count(words) * (T::one() - lock_fraction.clone());
    assemble(
        f.clone(),
        cam_time(params, &f, n),
        rsvp_time(params),
        cam_power(params, &f, n, words),
        rsvp_power_fractional(params, n, &active),
    )
}

/// Both sides for `gate` on `(n+1)`-bit rows, with `f` from
/// [`match_fraction`].
pub fn compare<T: Scalar>(
    params: &CostParams<T>,
    gate: &Gate,
    n: u32,
    words: u64,
    lock_fraction: &T,
) -> Result<CostReport<T>, CostError> {
    let f = match_fraction(gate, n as usize + 1)?;
    compare_with_fraction(params, f, n, words, lock_fraction)
}

/// [`compare_with_fraction`] using [`cam_power_literal_e`] on the CAM side.
pub fn compare_literal_e<T: Scalar + Float>(
    params: &CostParams<T>,
    f: T,
    n: u32,
    words: u64,
    lock_fraction: T,
) -> Result<CostReport<T>, CostError> {
    check_unit(&f, "match fraction")?;
    check_unit(&lock_fraction, "lock fraction")?;
    let active = T::from_count(words) * (T::one() - lock_fraction);
    assemble(
        f,
        cam_time(params, &f, n),
        rsvp_time(params),
        cam_power_literal_e(params, f, n, words),
        rsvp_power_fractional(params, n, &active),
    )
}

/// RSVP time and power summed over a program, sampling the array's lock state.
/// The array is left unchanged; `n` is taken as `width - 1`.
pub fn rsvp_program_cost<T: Scalar>(params: &CostParams<T>, array: &WordArray, program: &Program) -> (T, T) {
    let n = array.width().saturating_sub(1) as u32;
    let per_step_power = rsvp_power(params, n, array.active_count() as u64);
    let steps = T::from_count(program.len() as u64);
    (rsvp_time(params) * steps.clone(), per_step_power * steps)
}
