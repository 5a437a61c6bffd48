//! Wavefunctions, their branches and Born probabilities.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// A complex coefficient `re + im·i`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Amplitude {
    pub re: f64,
    pub im: f64,
}

impl Amplitude {
    pub const ZERO: Amplitude = Amplitude { re: 0.0, im: 0.0 };
    pub const ONE: Amplitude = Amplitude { re: 1.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    /// `|c|²`.
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }
}

impl std::ops::Mul for Amplitude {
    type Output = Amplitude;

    fn mul(self, other: Amplitude) -> Amplitude {
        Amplitude::new(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )
    }
}

/// One component `c_i|φ_i⟩` of a superposition, with the eigenvalue the
/// measurement reports when this branch is realized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenBranch {
    pub label: String,
    pub amplitude: Amplitude,
    pub eigenvalue: f64,
}

impl EigenBranch {
    pub fn new(label: impl Into<String>, amplitude: Amplitude, eigenvalue: f64) -> Self {
        Self {
            label: label.into(),
            amplitude,
            eigenvalue,
        }
    }

    pub fn born_probability(&self) -> f64 {
        born_probability(self)
    }
}

/// `|c|²` of the branch amplitude. Only meaningful as a probability once the
/// owning wavefunction is normalized.
pub fn born_probability(branch: &EigenBranch) -> f64 {
    branch.amplitude.norm_sqr()
}

/// A finite superposition over labeled eigen-branches. Branch order is the
/// canonical iteration order for every downstream operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFunction {
    pub observable_name: String,
    pub branches: Vec<EigenBranch>,
}

/// A failed wavefunction invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail")]
pub enum Violation {
    NoBranches,
    DuplicateLabel(String),
    NonFinite(String),
    NotNormalized(f64),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoBranches => write!(f, "state has no branches"),
            Violation::DuplicateLabel(l) => write!(f, "duplicate label `{l}`"),
            Violation::NonFinite(l) => write!(f, "amplitude of `{l}` is not finite"),
            Violation::NotNormalized(s) => write!(f, "Σ|c|² = {s}, expected 1"),
        }
    }
}

impl WaveFunction {
    pub fn new(observable_name: impl Into<String>, branches: Vec<EigenBranch>) -> Self {
        Self {
            observable_name: observable_name.into(),
            branches,
        }
    }

    /// Builds a state from `(label, amplitude)` pairs with eigenvalues
    /// `0, 1, 2, …`, without normalizing.
    pub fn from_amplitudes<L: Into<String>>(
        observable_name: impl Into<String>,
        amplitudes: impl IntoIterator<Item = (L, Amplitude)>,
    ) -> Self {
        let branches = amplitudes
            .into_iter()
            .enumerate()
            .map(|(i, (label, amp))| EigenBranch::new(label, amp, i as f64))
            .collect();
        Self::new(observable_name, branches)
    }

    /// Builds a normalized state whose Born probabilities are `probs`, with
    /// real non-negative amplitudes `√p`.
    pub fn from_probabilities<L: Into<String>>(
        observable_name: impl Into<String>,
        probs: impl IntoIterator<Item = (L, f64)>,
    ) -> Self {
        Self::from_amplitudes(
            observable_name,
            probs
                .into_iter()
                .map(|(l, p)| (l, Amplitude::real(p.sqrt()))),
        )
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.branches.iter().map(|b| b.label.as_str())
    }

    pub fn branch(&self, label: &str) -> Option<&EigenBranch> {
        self.branches.iter().find(|b| b.label == label)
    }

    /// Born probability of `label`, or [`Error::UnknownLabel`].
    pub fn probability_of(&self, label: &str) -> Result<f64> {
        self.branch(label)
            .map(born_probability)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    /// Born probability of `label`, counting an absent label as 0.
    pub fn probability_or_zero(&self, label: &str) -> f64 {
        self.branch(label).map_or(0.0, born_probability)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.branches.iter().map(born_probability).collect()
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(born_probability).sum()
    }

    /// Returns one violation per failed invariant; empty iff the state is
    /// usable by the engine.
    pub fn validate(&self, tol: &Tolerances) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.branches.is_empty() {
            out.push(Violation::NoBranches);
            return out;
        }
        let mut seen = HashSet::new();
        for b in &self.branches {
            if !seen.insert(b.label.as_str()) {
                out.push(Violation::DuplicateLabel(b.label.clone()));
            }
            if !b.amplitude.is_finite() || !b.eigenvalue.is_finite() {
                out.push(Violation::NonFinite(b.label.clone()));
            }
        }
        let total = self.total_probability();
        if !total.is_finite() || (total - 1.0).abs() > tol.eps_norm {
            out.push(Violation::NotNormalized(total));
        }
        out
    }

    pub fn ensure_valid(&self, tol: &Tolerances) -> Result<()> {
        let violations = self.validate(tol);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidState(violations))
        }
    }

    pub fn is_normalized(&self, tol: &Tolerances) -> bool {
        (self.total_probability() - 1.0).abs() <= tol.eps_norm
    }

    /// Divides every amplitude by `√Σ|c|²`. A state already normalized within
    /// `eps_norm` is returned unchanged, which makes the operation idempotent
    /// bit-for-bit.
    pub fn normalize(&self, tol: &Tolerances) -> Result<WaveFunction> {
        let total = self.total_probability();
        if total <= 0.0 {
            return Err(Error::ZeroState);
        }
        if (total - 1.0).abs() <= tol.eps_norm {
            return Ok(self.clone());
        }
        let k = total.sqrt().recip();
        let branches = self
            .branches
            .iter()
            .map(|b| EigenBranch {
                amplitude: b.amplitude.scale(k),
                ..b.clone()
            })
            .collect();
        Ok(WaveFunction::new(self.observable_name.clone(), branches))
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> WaveFunction {
        let phase = Amplitude::new(theta.cos(), theta.sin());
        let branches = self
            .branches
            .iter()
            .map(|b| EigenBranch {
                amplitude: b.amplitude * phase,
                ..b.clone()
            })
            .collect();
        WaveFunction::new(self.observable_name.clone(), branches)
    }
}
