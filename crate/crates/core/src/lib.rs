//! Measurement collapse over finite superpositions, and the modal structure
//! that falls out of it.
//!
//! A [`WaveFunction`] is a finite list of labeled complex amplitudes. Measuring
//! it realizes exactly one branch; every other branch with non-zero Born
//! probability becomes *possible relative to* the realized one, and branches
//! with zero probability are *absurd* relative to it. From there the crate
//! builds:
//!
//! - [`possibility`]: the relative-possibility relation, its axioms, and the
//!   probability-graded ordering of possible branches with lower/upper bounds.
//! - [`modal`]: impossibility and necessity as quantification over a declared
//!   [`ContextFamily`], plus a small modal formula evaluator.
//! - [`graph`]: sequential measurements as an oriented forest whose path
//!   products are composed (conditional) probabilities.
//! - [`algebra`]: an exhaustive checker for order, lattice and Boolean
//!   claims over the probability carrier of a state.
//! - [`dsl`]: the `.qpd` scenario format, and [`run`]: its executor.

pub mod algebra;
pub mod collapse;
pub mod dsl;
pub mod error;
pub mod graph;
pub mod modal;
pub mod possibility;
pub mod run;
pub mod state;
pub mod tolerance;

pub use algebra::{AlgebraReport, ProbabilitySet, Verdict};
pub use collapse::{collapse_forced, collapse_random, CollapseRecord};
pub use error::{Error, Result};
pub use graph::{BranchGraph, VertexId};
pub use modal::{ContextFamily, ModalFormula};
pub use possibility::{Grade, GradeOrdering, PossibilityContext};
pub use state::{Amplitude, EigenBranch, Violation, WaveFunction};
pub use tolerance::Tolerances;
