//! Finite-dimensional K-frames, K-duals and K-frame multipliers over `C^n`.

pub mod duality;
pub mod error;
pub mod fixtures;
pub mod frames;
pub mod linalg;
pub mod multipliers;
pub mod random;
pub mod tolerance;

pub use error::{KFrameError, Result};
pub use frames::Frame;
pub use linalg::{ComplexMatrix, ComplexVector, OperatorEnv, C64};
pub use multipliers::{Multiplier, Symbol};
pub use tolerance::{Check, RankTolerance, Tolerances};
