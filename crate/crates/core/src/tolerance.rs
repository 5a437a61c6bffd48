use serde::{Deserialize, Serialize};

/// Floating-point cutoffs shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Allowed deviation of `Σ|c|²` from 1.
    pub eps_norm: f64,
    /// Probabilities at or below this are treated as exactly zero (absurd).
    pub eps_zero: f64,
    /// Probabilities closer than this share a grade of possibility.
    pub eps_grade: f64,
    /// Largest carrier the algebra verifier will enumerate.
    pub algebra_cap: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        eps_norm: 1e-9,
        eps_zero: 1e-12,
        eps_grade: 1e-9,
        algebra_cap: 64,
    };

    pub fn is_zero(&self, p: f64) -> bool {
        p <= self.eps_zero
    }

    pub fn is_one(&self, p: f64) -> bool {
        p >= 1.0 - self.eps_zero
    }

    pub fn same_grade(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.eps_grade
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
