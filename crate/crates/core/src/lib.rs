//! ORBGRAND soft-detection decoding with three error-pattern schedules:
//! logistic weight order (LWO), improved logistic weight order (iLWO) and a
//! streaming approximation of iLWO restricted to Hamming weight three.
//!
//! Patterns are indexed in sorted-reliability space: index 0 is the least
//! reliable received position.

pub mod channel;
pub mod code;
pub mod decoder;
pub mod error;
pub mod ilwo;
pub mod lwo;
pub mod pattern;
pub mod schedule;
pub mod sim;
pub mod stats;

pub use channel::{hard_decision, reliability_permutation, SoftVector};
pub use code::{Code, CodeChecker};
pub use decoder::{decode, decode_with_schedule, DecodeConfig, DecodeOutcome, DecodeStatus};
pub use error::{GrandError, Result};
pub use ilwo::{approx_sequence, ilwo_sequence, ApproxIlwoGenerator, IlwoExactGenerator};
pub use lwo::{is_last, lwo_sequence, max_integer_partition, LwoGenerator};
pub use pattern::{ErrorPattern, UpoOrdering};
pub use schedule::Schedule;
pub use sim::{run_bler, SimConfig, SimResult};
