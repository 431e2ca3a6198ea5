//! Behavioral simulator for a reversible state vector parallel (RSVP)
//! processor.
//!
//! The machine holds an array of words, each storing an address together
//! with flag bits. Programs ("address diagrams") are sequences of
//! multi-controlled NOTs applied to every word in lockstep. On top of the
//! engine sit compilers for keyword search, formula satisfiability and
//! truth-table property analysis, and a cost model comparing the machine
//! with a conventional CAM performing the same controlled NOTs.
//!
//! ```
//! use rsvp_core::{diagram, WordArray};
//!
//! let program = diagram::parse(
//!     "width 3\nbit Num1 2\nbit Num0 1\nbit f 0\n\
//!      not Num1\ntoggle f when Num1,Num0\nnot Num1\n",
//! )?;
//! let mut words = WordArray::from_strs(&["010", "000", "100"], 3)?;
//! words.apply_program(&program)?;
//! assert_eq!(words.locate_flags(0)?, [0]);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod bits;
pub mod compilers;
pub mod costmodel;
pub mod diagram;
pub mod engine;
pub mod scalar;
pub mod wordset;

pub use bits::BitString;
pub use diagram::Program;
pub use engine::{EngineError, EventCounters, Gate, LockSense, Word, WordArray};
pub use scalar::Scalar;

/// Exact rational scalar for the cost model.
pub type Exact = num_rational::BigRational;

pub type CostParamsF32 = costmodel::CostParams<f32>;
pub type CostParamsF64 = costmodel::CostParams<f64>;
pub type ExactCostParams = costmodel::CostParams<Exact>;

pub type CostReportF32 = costmodel::CostReport<f32>;
pub type CostReportF64 = costmodel::CostReport<f64>;
pub type ExactCostReport = costmodel::CostReport<Exact>;
