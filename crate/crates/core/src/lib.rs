//! Decides rationality over Q of the fixed fields
//! `L0 = Q(t1, t2, t3, t4)` with `t1^2 - a*t2^2 = b` and
//! `t3^2 - a*t4^2 = 2*c*t1 + d`, and produces checkable certificates:
//! rational points, Hilbert-symbol obstructions and explicit birational
//! parametrizations. Everything is exact; there is no floating point.

pub mod arith;
pub mod decider;
pub mod error;
pub mod factor;
pub mod hilbert;
pub mod quadfield;
pub mod sigma;
pub mod solver;

pub use error::{Error, Result};
