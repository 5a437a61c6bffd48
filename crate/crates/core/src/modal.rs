//! Context-quantified modality.
//!
//! "Every context" is modelled by an explicit [`ContextFamily`] of
//! wavefunctions. A label is *impossible* when it is absurd in every member
//! and *necessary* when it is deterministic in every member. Labels missing
//! from a member count as probability 0 there.
//!
//! [`ModalFormula`] is evaluated over the family as a Kripke frame whose
//! worlds are the members and where every world sees every other. Atoms are
//! world-local (`atom(l)`: `l` can be realized in that world), `pos` is
//! existential over the family, and `nec f` is evaluated literally as
//! `not pos not f`. A top-level formula is evaluated at the first member.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::possibility::PossibilityContext;
use crate::state::WaveFunction;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct ContextFamily {
    name: String,
    members: Vec<WaveFunction>,
    tol: Tolerances,
}

impl ContextFamily {
    pub fn new(
        name: impl Into<String>,
        members: Vec<WaveFunction>,
        tol: Tolerances,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for m in &members {
            m.ensure_valid(&tol)?;
        }
        Ok(Self {
            name: name.into(),
            members,
            tol,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn members(&self) -> &[WaveFunction] {
        &self.members
    }

    /// Every label mentioned by some member.
    pub fn vocabulary(&self) -> BTreeSet<&str> {
        self.members.iter().flat_map(|m| m.labels()).collect()
    }

    /// Appends members, as when more contexts are taken into account.
    pub fn extended(&self, more: impl IntoIterator<Item = WaveFunction>) -> Result<Self> {
        let mut members = self.members.clone();
        members.extend(more);
        Self::new(self.name.clone(), members, self.tol)
    }

    fn deterministic_in(&self, member: &WaveFunction, label: &str) -> bool {
        PossibilityContext::new(member.clone(), label, self.tol)
            .map(|ctx| ctx.classify_deterministic())
            .unwrap_or(false)
    }

    fn absurd_in(&self, member: &WaveFunction, label: &str) -> bool {
        // Any realizable branch can anchor the context; a valid member has one.
        let anchor = member
            .branches
            .iter()
            .find(|b| !self.tol.is_zero(b.born_probability()))
            .map(|b| b.label.as_str());
        match anchor.map(|a| PossibilityContext::new(member.clone(), a, self.tol)) {
            Some(Ok(ctx)) => ctx.classify_absurd(label).unwrap_or(true),
            _ => true,
        }
    }

    fn realizable_in(&self, member: &WaveFunction, label: &str) -> bool {
        !self.tol.is_zero(member.probability_or_zero(label))
    }
}

/// Absurd (probability 0, or absent) in every member.
pub fn is_impossible(family: &ContextFamily, label: &str) -> bool {
    family.members.iter().all(|m| family.absurd_in(m, label))
}

/// Deterministic (probability 1) in every member.
pub fn is_necessary(family: &ContextFamily, label: &str) -> bool {
    family
        .members
        .iter()
        .all(|m| family.deterministic_in(m, label))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", content = "arg", rename_all = "snake_case")]
pub enum ModalFormula {
    Atom(String),
    Not(Box<ModalFormula>),
    Possibly(Box<ModalFormula>),
    Necessarily(Box<ModalFormula>),
    Det(String),
    Abs(String),
}

impl ModalFormula {
    pub fn atom(label: impl Into<String>) -> Self {
        Self::Atom(label.into())
    }

    pub fn det(label: impl Into<String>) -> Self {
        Self::Det(label.into())
    }

    pub fn abs(label: impl Into<String>) -> Self {
        Self::Abs(label.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Self::Not(Box::new(self))
    }

    pub fn possibly(self) -> Self {
        Self::Possibly(Box::new(self))
    }

    pub fn necessarily(self) -> Self {
        Self::Necessarily(Box::new(self))
    }

    pub fn depth(&self) -> usize {
        match self {
            Self::Atom(_) | Self::Det(_) | Self::Abs(_) => 1,
            Self::Not(f) | Self::Possibly(f) | Self::Necessarily(f) => 1 + f.depth(),
        }
    }

    pub fn labels(&self) -> Vec<&str> {
        let mut f = self;
        loop {
            match f {
                Self::Atom(l) | Self::Det(l) | Self::Abs(l) => return vec![l.as_str()],
                Self::Not(g) | Self::Possibly(g) | Self::Necessarily(g) => f = g,
            }
        }
    }
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Atom(l) => write!(f, "atom({l})"),
            Self::Det(l) => write!(f, "det({l})"),
            Self::Abs(l) => write!(f, "abs({l})"),
            Self::Not(g) => write!(f, "not {g}"),
            Self::Possibly(g) => write!(f, "pos {g}"),
            Self::Necessarily(g) => write!(f, "nec {g}"),
        }
    }
}

/// Result of evaluating a formula over a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub formula: String,
    pub value: bool,
    /// Members (by observable name) at which the formula holds.
    pub witnesses: Vec<String>,
}

fn check_vocabulary(family: &ContextFamily, f: &ModalFormula) -> Result<()> {
    let vocab = family.vocabulary();
    for l in f.labels() {
        if !vocab.contains(l) {
            return Err(Error::UnknownAtomLabel(l.to_owned()));
        }
    }
    Ok(())
}

/// Truth of `f` at member `world`.
pub fn holds_at(family: &ContextFamily, f: &ModalFormula, world: usize) -> Result<bool> {
    check_vocabulary(family, f)?;
    Ok(eval_at(family, f, world))
}

fn eval_at(family: &ContextFamily, f: &ModalFormula, world: usize) -> bool {
    let member = &family.members[world];
    match f {
        ModalFormula::Atom(l) => family.realizable_in(member, l),
        ModalFormula::Det(l) => family.deterministic_in(member, l),
        ModalFormula::Abs(l) => family.absurd_in(member, l),
        ModalFormula::Not(g) => !eval_at(family, g, world),
        ModalFormula::Possibly(g) => (0..family.members.len()).any(|w| eval_at(family, g, w)),
        ModalFormula::Necessarily(g) => {
            let dual = ModalFormula::Possibly(Box::new(ModalFormula::Not(g.clone())));
            !eval_at(family, &dual, world)
        }
    }
}

/// Evaluates `f` at the family's first member.
pub fn eval_formula(family: &ContextFamily, f: &ModalFormula) -> Result<bool> {
    holds_at(family, f, 0)
}

/// [`eval_formula`] plus the members where `f` holds.
pub fn evaluate(family: &ContextFamily, f: &ModalFormula) -> Result<Evaluation> {
    check_vocabulary(family, f)?;
    let witnesses = (0..family.members.len())
        .filter(|&w| eval_at(family, f, w))
        .map(|w| family.members[w].observable_name.clone())
        .collect();
    Ok(Evaluation {
        formula: f.to_string(),
        value: eval_at(family, f, 0),
        witnesses,
    })
}
