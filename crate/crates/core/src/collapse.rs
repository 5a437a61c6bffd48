//! The measurement arrow: a wavefunction collapses onto one realized branch.
//!
//! Random collapse is reproducible across platforms and languages. The
//! generator is xoshiro256** whose 256-bit state is filled by four successive
//! SplitMix64 outputs of the 64-bit seed. One draw `u = (x >> 11)·2⁻⁵³` is
//! taken from the first output `x`, scaled by the total mass of the
//! realizable branches, and the realized branch is the first one (in
//! canonical order) whose cumulative probability exceeds it. Branches at or
//! below `eps_zero` are skipped and can never be realized.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::WaveFunction;
use crate::tolerance::Tolerances;

/// One measurement event. Serialized field order is part of the output
/// format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseRecord {
    pub measurement_id: String,
    pub observable_name: String,
    pub realized_label: String,
    pub realized_eigenvalue: f64,
    pub realized_probability: f64,
    /// Non-realized branches with probability above `eps_zero`.
    pub possible_labels: Vec<String>,
    pub seed_used: Option<u64>,
    /// Branches with probability at or below `eps_zero`.
    pub absurd_labels: Vec<String>,
}

/// Uniform draw in `[0, 1)` for `seed`.
pub fn uniform_from_seed(seed: u64) -> f64 {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    unit_interval(rng.next_u64())
}

fn unit_interval(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Index of the branch realized by the uniform draw `u ∈ [0, 1)`.
fn select(wf: &WaveFunction, u: f64, tol: &Tolerances) -> usize {
    let probs = wf.probabilities();
    let mass: f64 = probs.iter().filter(|&&p| !tol.is_zero(p)).sum();
    let target = u * mass;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if tol.is_zero(p) {
            continue;
        }
        acc += p;
        last = i;
        if target < acc {
            return i;
        }
    }
    // u·mass can round up to the final cumulative sum.
    last
}

fn record(
    wf: &WaveFunction,
    measurement_id: &str,
    realized: usize,
    seed: Option<u64>,
    tol: &Tolerances,
) -> CollapseRecord {
    let branch = &wf.branches[realized];
    let mut possible = Vec::new();
    let mut absurd = Vec::new();
    for (i, b) in wf.branches.iter().enumerate() {
        if i == realized {
            continue;
        }
        if tol.is_zero(b.born_probability()) {
            absurd.push(b.label.clone());
        } else {
            possible.push(b.label.clone());
        }
    }
    CollapseRecord {
        measurement_id: measurement_id.to_owned(),
        observable_name: wf.observable_name.clone(),
        realized_label: branch.label.clone(),
        realized_eigenvalue: branch.eigenvalue,
        realized_probability: branch.born_probability(),
        possible_labels: possible,
        seed_used: seed,
        absurd_labels: absurd,
    }
}

/// Collapses `wf` by Born-rule sampling. Identical `(wf, seed)` pairs always
/// produce identical records.
pub fn collapse_random(
    wf: &WaveFunction,
    measurement_id: &str,
    seed: u64,
    tol: &Tolerances,
) -> Result<CollapseRecord> {
    wf.ensure_valid(tol)?;
    let realized = select(wf, uniform_from_seed(seed), tol);
    Ok(record(wf, measurement_id, realized, Some(seed), tol))
}

/// Collapses `wf` onto `label`. Absurd branches cannot be forced.
pub fn collapse_forced(
    wf: &WaveFunction,
    measurement_id: &str,
    label: &str,
    tol: &Tolerances,
) -> Result<CollapseRecord> {
    wf.ensure_valid(tol)?;
    let realized = wf
        .branches
        .iter()
        .position(|b| b.label == label)
        .ok_or_else(|| Error::UnknownLabel(label.to_owned()))?;
    if tol.is_zero(wf.branches[realized].born_probability()) {
        return Err(Error::ZeroProbabilityOutcome(label.to_owned()));
    }
    Ok(record(wf, measurement_id, realized, None, tol))
}
