//! Numerical tolerances and size limits shared by every module.

use serde::{Deserialize, Serialize};

/// Default absolute comparison tolerance for unit-scale quantities.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Default cap on the dimension of a spin factor.
pub const DEFAULT_MAX_DIM: usize = 64;

/// Absolute comparison tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance(f64);

impl Tolerance {
    /// Returns `None` unless `eps` is finite and strictly positive.
    pub fn new(eps: f64) -> Option<Self> {
        (eps.is_finite() && eps > 0.0).then_some(Self(eps))
    }

    #[inline]
    pub fn eps(self) -> f64 {
        self.0
    }

    /// Square root of the tolerance, used for the looser determinant bands.
    #[inline]
    pub fn sqrt(self) -> f64 {
        self.0.sqrt()
    }

    #[inline]
    pub fn is_zero(self, x: f64) -> bool {
        x.abs() <= self.0
    }

    #[inline]
    pub fn close(self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self(DEFAULT_EPS)
    }
}

/// Library-wide configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub tol: Tolerance,
    pub max_dim: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}
