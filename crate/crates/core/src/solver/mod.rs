//! Constructive rational points: norm equations, isotropic vectors of
//! diagonal quadrics, and parametrizations by projection from a point.

mod norm;
mod param;
mod quadric;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

pub use norm::{solve_norm_equation, solve_ternary, ConicSolution};
pub use param::{stereographic_parametrize, stereographic_parametrize_with, SurfaceParam};
pub use quadric::{find_quadric_point, primitive_vector, QuadricSpec};

pub const DEFAULT_DESCENT_HEIGHT: u64 = 1_000_000;
pub const DEFAULT_FALLBACK_HEIGHT: u64 = 10_000;
pub const DEFAULT_QUADRIC_HEIGHT: u64 = 24;

/// Cooperative cancellation flag shared between a caller and long searches.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.is_cancelled() {
            Err(Error::Cancelled)
        } else {
            Ok(())
        }
    }
}

/// Search budgets. Every output is a pure function of the inputs and these
/// numbers.
///
/// * `descent_height`: bound on the candidates tried when looking for a
///   quadratic nonresidue modulo a prime during descent.
/// * `fallback_height`: height bound of the exhaustive search used when
///   descent gives up.
/// * `quadric_height`: height bound of the direct sieved search for
///   isotropic vectors, before the reduction to a family of conics.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub descent_height: u64,
    pub fallback_height: u64,
    pub quadric_height: u64,
    pub cancel: CancelToken,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            descent_height: DEFAULT_DESCENT_HEIGHT,
            fallback_height: DEFAULT_FALLBACK_HEIGHT,
            quadric_height: DEFAULT_QUADRIC_HEIGHT,
            cancel: CancelToken::new(),
        }
    }
}
