//! Relative possibility among eigen-branches.
//!
//! Possibility is a relation, never a predicate on its own: a branch is
//! possible *for* the realized branch of a [`PossibilityContext`] when it was
//! not realized and had non-zero probability. Zero-probability branches are
//! absurd relative to it instead. Possible branches are graded by Born
//! probability; a higher probability is "more possible", i.e. nearer the
//! realized branch.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::collapse::CollapseRecord;
use crate::error::{Error, Result};
use crate::state::WaveFunction;
use crate::tolerance::Tolerances;

/// A wavefunction together with the branch its measurement realized.
#[derive(Debug, Clone, PartialEq)]
pub struct PossibilityContext {
    source: WaveFunction,
    realized_label: String,
    tol: Tolerances,
}

/// Outcome of comparing two non-realized branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Grade {
    MorePossible,
    SameGrade,
    LessPossible,
}

impl Grade {
    pub fn reverse(self) -> Grade {
        match self {
            Grade::MorePossible => Grade::LessPossible,
            Grade::SameGrade => Grade::SameGrade,
            Grade::LessPossible => Grade::MorePossible,
        }
    }
}

/// Labels sharing one grade of possibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeClass {
    /// Probability of the class's first (largest) member.
    pub probability: f64,
    pub labels: Vec<String>,
}

/// Possible branches of a context grouped into same-grade classes, most
/// possible first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeOrdering {
    pub observable_name: String,
    pub realized_label: String,
    pub classes: Vec<GradeClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: Vec<String>,
    pub upper: Vec<String>,
}

impl PossibilityContext {
    pub fn new(source: WaveFunction, realized_label: &str, tol: Tolerances) -> Result<Self> {
        let p = source.probability_of(realized_label)?;
        if tol.is_zero(p) {
            return Err(Error::ZeroProbabilityOutcome(realized_label.to_owned()));
        }
        Ok(Self {
            source,
            realized_label: realized_label.to_owned(),
            tol,
        })
    }

    pub fn from_record(
        source: &WaveFunction,
        record: &CollapseRecord,
        tol: Tolerances,
    ) -> Result<Self> {
        Self::new(source.clone(), &record.realized_label, tol)
    }

    pub fn source(&self) -> &WaveFunction {
        &self.source
    }

    pub fn realized_label(&self) -> &str {
        &self.realized_label
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// `label ∼ realized`: not realized, and not absurd.
    pub fn is_possible_for(&self, label: &str) -> Result<bool> {
        let p = self.source.probability_of(label)?;
        Ok(label != self.realized_label && !self.tol.is_zero(p))
    }

    /// Labels possible for the realized branch, in canonical order.
    pub fn possible_labels(&self) -> impl Iterator<Item = &str> {
        self.source.branches.iter().filter_map(move |b| {
            (b.label != self.realized_label && !self.tol.is_zero(b.born_probability()))
                .then_some(b.label.as_str())
        })
    }

    /// The realized branch had probability 1: nothing else was possible.
    pub fn classify_deterministic(&self) -> bool {
        self.tol
            .is_one(self.source.probability_or_zero(&self.realized_label))
    }

    /// The branch had probability 0 while another was realized.
    pub fn classify_absurd(&self, label: &str) -> Result<bool> {
        Ok(self.tol.is_zero(self.source.probability_of(label)?))
    }

    fn graded_probability(&self, label: &str) -> Result<f64> {
        let p = self.source.probability_of(label)?;
        if label == self.realized_label {
            return Err(Error::RealizedOperand(label.to_owned()));
        }
        Ok(p)
    }

    /// Compares `|c_a|²` with `|c_b|²` relative to the realized branch.
    pub fn more_possible(&self, a: &str, b: &str) -> Result<Grade> {
        let pa = self.graded_probability(a)?;
        let pb = self.graded_probability(b)?;
        Ok(if self.tol.same_grade(pa, pb) {
            Grade::SameGrade
        } else if pa > pb {
            Grade::MorePossible
        } else {
            Grade::LessPossible
        })
    }

    /// Groups the possible branches into descending same-grade classes.
    /// Adjacent labels (by probability) closer than `eps_grade` share a
    /// class, so class probabilities are separated by more than `eps_grade`.
    pub fn grade_ordering(&self) -> GradeOrdering {
        let mut graded: Vec<(&str, f64)> = self
            .possible_labels()
            .map(|l| (l, self.source.probability_or_zero(l)))
            .collect();
        // Stable: ties keep canonical order.
        graded.sort_by(|a, b| b.1.total_cmp(&a.1));

        let mut classes: Vec<GradeClass> = Vec::new();
        let mut prev: Option<f64> = None;
        for (label, p) in graded {
            match (prev, classes.last_mut()) {
                (Some(q), Some(class)) if self.tol.same_grade(p, q) => {
                    class.labels.push(label.to_owned());
                }
                _ => classes.push(GradeClass {
                    probability: p,
                    labels: vec![label.to_owned()],
                }),
            }
            prev = Some(p);
        }
        GradeOrdering {
            observable_name: self.source.observable_name.clone(),
            realized_label: self.realized_label.clone(),
            classes,
        }
    }
}

impl GradeOrdering {
    /// Least possible class (lower) and most possible class (upper).
    pub fn bounds(&self) -> Result<Bounds> {
        match (self.classes.first(), self.classes.last()) {
            (Some(first), Some(last)) => Ok(Bounds {
                lower: last.labels.clone(),
                upper: first.labels.clone(),
            }),
            _ => Err(Error::EmptyOrdering),
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.classes
            .iter()
            .flat_map(|c| c.labels.iter().map(String::as_str))
    }
}

/// Possible relative to at least one context of `universe`.
pub fn is_possible_tout_court(universe: &[PossibilityContext], label: &str) -> Result<bool> {
    let mut mentioned = false;
    for ctx in universe {
        if ctx.source.branch(label).is_some() {
            mentioned = true;
            if ctx.is_possible_for(label)? {
                return Ok(true);
            }
        }
    }
    if mentioned {
        Ok(false)
    } else {
        Err(Error::UnknownLabel(label.to_owned()))
    }
}

/// Verdict for one relation law over the union of a context family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub law: String,
    pub also_known_as: String,
    pub holds: bool,
    /// Instances examined (pairs or chains).
    pub checked: usize,
    pub violations: usize,
    /// At most [`MAX_COUNTEREXAMPLES`] witnesses, in canonical order.
    pub counterexamples: Vec<Vec<String>>,
}

pub const MAX_COUNTEREXAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// Pairs `(x, y)` with `x ∼ y` in some context.
    pub relation_size: usize,
    pub irreflexivity: AxiomCheck,
    pub asymmetry: AxiomCheck,
    pub transitivity: AxiomCheck,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.irreflexivity.holds && self.asymmetry.holds && self.transitivity.holds
    }
}

struct Tally {
    law: &'static str,
    aka: &'static str,
    checked: usize,
    violations: usize,
    examples: Vec<Vec<String>>,
}

impl Tally {
    fn new(law: &'static str, aka: &'static str) -> Self {
        Self {
            law,
            aka,
            checked: 0,
            violations: 0,
            examples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Vec<String>) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < MAX_COUNTEREXAMPLES {
                self.examples.push(witness());
            }
        }
    }

    fn finish(self) -> AxiomCheck {
        AxiomCheck {
            law: self.law.to_owned(),
            also_known_as: self.aka.to_owned(),
            holds: self.violations == 0,
            checked: self.checked,
            violations: self.violations,
            counterexamples: self.examples,
        }
    }
}

/// The relation `x ∼ y` induced by a family of contexts: `x` possible for the
/// realized `y` in at least one of them. Labels are identified by name across
/// contexts.
pub fn induced_relation(family: &[PossibilityContext]) -> BTreeSet<(String, String)> {
    family
        .iter()
        .flat_map(|ctx| {
            ctx.possible_labels()
                .map(move |l| (l.to_owned(), ctx.realized_label.clone()))
        })
        .collect()
}

/// Checks irreflexivity `¬(x∼x)`, asymmetry `x∼y → ¬(y∼x)` and transitivity
/// `x∼y ∧ y∼z → x∼z` of the induced relation, reporting counterexamples
/// instead of failing.
pub fn check_relation_axioms(family: &[PossibilityContext]) -> AxiomReport {
    let relation = induced_relation(family);
    let mut successors: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (x, y) in &relation {
        successors.entry(x).or_default().push(y);
    }
    let holds = |x: &str, y: &str| relation.contains(&(x.to_owned(), y.to_owned()));

    let mut irreflexive = Tally::new("irreflexivity", "anti-symmetry");
    let mut asymmetric = Tally::new("asymmetry", "not reflexivity");
    let mut transitive = Tally::new("transitivity", "transitivity");

    for (x, y) in &relation {
        irreflexive.check(x != y, || vec![x.clone()]);
        if x != y {
            asymmetric.check(!holds(y, x), || vec![x.clone(), y.clone()]);
        }
        for z in successors.get(y.as_str()).into_iter().flatten() {
            transitive.check(holds(x, z), || vec![x.clone(), y.clone(), (*z).to_owned()]);
        }
    }

    AxiomReport {
        relation_size: relation.len(),
        irreflexivity: irreflexive.finish(),
        asymmetry: asymmetric.finish(),
        transitivity: transitive.finish(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Amplitude;
    use proptest::prelude::*;

    const TOL: Tolerances = Tolerances::DEFAULT;

    fn probs(ps: &[f64]) -> WaveFunction {
        WaveFunction::from_probabilities(
            "O",
            ps.iter()
                .enumerate()
                .map(|(i, &p)| (format!("phi{}", i + 1), p)),
        )
    }

    fn ctx(ps: &[f64], realized: &str) -> PossibilityContext {
        PossibilityContext::new(probs(ps), realized, TOL).unwrap()
    }

    fn with_empty() -> WaveFunction {
        WaveFunction::from_amplitudes("O", [("phi1", Amplitude::ONE), ("empty", Amplitude::ZERO)])
    }

    #[test]
    fn possible_for() {
        let c = ctx(&[0.7, 0.3], "phi1");
        assert!(c.is_possible_for("phi2").unwrap());
        assert!(!c.is_possible_for("phi1").unwrap());
        let c = PossibilityContext::new(with_empty(), "phi1", TOL).unwrap();
        assert!(!c.is_possible_for("empty").unwrap());
        assert_eq!(c.is_possible_for("x"), Err(Error::UnknownLabel("x".into())));
    }

    #[test]
    fn context_rejects_absurd_realization() {
        assert_eq!(
            PossibilityContext::new(with_empty(), "empty", TOL),
            Err(Error::ZeroProbabilityOutcome("empty".into()))
        );
    }

    #[test]
    fn tout_court_is_existential() {
        let wf = probs(&[0.5, 0.3, 0.2]);
        let universe: Vec<_> = ["phi1", "phi1", "phi3"]
            .iter()
            .map(|r| PossibilityContext::new(wf.clone(), r, TOL).unwrap())
            .collect();
        // phi3 is realized in one context but possible in the other two.
        assert!(is_possible_tout_court(&universe, "phi3").unwrap());

        let realized_everywhere = vec![ctx(&[1.0], "phi1"), ctx(&[1.0], "phi1")];
        assert!(!is_possible_tout_court(&realized_everywhere, "phi1").unwrap());

        let zero = vec![
            PossibilityContext::new(with_empty(), "phi1", TOL).unwrap(),
            PossibilityContext::new(with_empty(), "phi1", TOL).unwrap(),
        ];
        assert!(!is_possible_tout_court(&zero, "empty").unwrap());
        assert_eq!(
            is_possible_tout_court(&zero, "ghost"),
            Err(Error::UnknownLabel("ghost".into()))
        );
    }

    #[test]
    fn deterministic_contexts() {
        assert!(ctx(&[1.0], "phi1").classify_deterministic());
        assert!(PossibilityContext::new(with_empty(), "phi1", TOL)
            .unwrap()
            .classify_deterministic());
        assert!(!ctx(&[0.5, 0.5], "phi1").classify_deterministic());
    }

    #[test]
    fn absurd_branches() {
        let c = PossibilityContext::new(with_empty(), "phi1", TOL).unwrap();
        assert!(c.classify_absurd("empty").unwrap());
        let c = ctx(&[0.8, 0.0, 0.2], "phi1");
        assert!(c.classify_absurd("phi2").unwrap());
        assert!(!c.classify_absurd("phi3").unwrap());
    }

    #[test]
    fn grading_half_against_third() {
        let c = ctx(&[1.0 / 6.0, 0.5, 1.0 / 3.0], "phi1");
        assert_eq!(
            c.more_possible("phi2", "phi3").unwrap(),
            Grade::MorePossible
        );
        assert_eq!(
            c.more_possible("phi3", "phi2").unwrap(),
            Grade::LessPossible
        );
        assert_eq!(c.more_possible("phi2", "phi2").unwrap(), Grade::SameGrade);
        assert_eq!(
            c.more_possible("phi1", "phi2"),
            Err(Error::RealizedOperand("phi1".into()))
        );
        let c = ctx(&[0.3, 0.2, 0.5], "phi1");
        assert_eq!(
            c.more_possible("phi2", "phi3").unwrap(),
            Grade::LessPossible
        );
    }

    #[test]
    fn ordering_groups_ties() {
        let o = ctx(&[0.2, 0.3, 0.3, 0.2], "phi1").grade_ordering();
        let labels: Vec<Vec<&str>> = o
            .classes
            .iter()
            .map(|c| c.labels.iter().map(String::as_str).collect())
            .collect();
        assert_eq!(labels, vec![vec!["phi2", "phi3"], vec!["phi4"]]);

        let o = ctx(&[0.4, 0.2, 0.2, 0.2], "phi1").grade_ordering();
        assert_eq!(o.classes.len(), 1);
        let b = o.bounds().unwrap();
        assert_eq!(b.lower, b.upper);
    }

    #[test]
    fn bounds_of_chain() {
        let o = ctx(&[0.1, 0.5, 0.3, 0.1], "phi4").grade_ordering();
        // phi1 and phi4 tie at 0.1, but phi4 is realized.
        let b = o.bounds().unwrap();
        assert_eq!(b.upper, ["phi2"]);
        assert_eq!(b.lower, ["phi1"]);
    }

    #[test]
    fn deterministic_context_has_no_bounds() {
        let c = PossibilityContext::new(with_empty(), "phi1", TOL).unwrap();
        let o = c.grade_ordering();
        // Enumerate every label: none is possible.
        assert!(c.source().labels().all(|l| !c.is_possible_for(l).unwrap()));
        assert_eq!(o.bounds(), Err(Error::EmptyOrdering));
    }

    #[test]
    fn axioms_single_context() {
        let r = check_relation_axioms(&[ctx(&[0.5, 0.3, 0.2], "phi2")]);
        assert!(r.all_hold());
        assert_eq!(r.relation_size, 2);
    }

    #[test]
    fn axioms_two_realizations_of_one_state_break_asymmetry() {
        let wf = probs(&[0.6, 0.4]);
        let family = [
            PossibilityContext::new(wf.clone(), "phi1", TOL).unwrap(),
            PossibilityContext::new(wf, "phi2", TOL).unwrap(),
        ];
        let r = check_relation_axioms(&family);
        assert!(r.irreflexivity.holds);
        assert!(!r.asymmetry.holds);
        assert_eq!(r.asymmetry.counterexamples[0], ["phi1", "phi2"]);
        // phi1∼phi2∼phi1 would demand phi1∼phi1.
        assert!(!r.transitivity.holds);
    }

    /// Brute-force transitivity over every label triple.
    fn transitivity_by_triples(family: &[PossibilityContext]) -> usize {
        let mut labels: BTreeSet<&str> = BTreeSet::new();
        for c in family {
            labels.extend(c.source().labels());
        }
        let rel = |x: &str, y: &str| {
            family.iter().any(|c| {
                c.realized_label() == y
                    && c.source().branch(x).is_some()
                    && c.is_possible_for(x).unwrap()
            })
        };
        let mut failures = 0;
        for x in &labels {
            for y in &labels {
                for z in &labels {
                    if rel(x, y) && rel(y, z) && !rel(x, z) {
                        failures += 1;
                    }
                }
            }
        }
        failures
    }

    #[test]
    fn chained_contexts_transitivity_matches_triples() {
        // a ∼ b in the first, b ∼ c in the second, a ∼ c in the third.
        let s1 = WaveFunction::from_probabilities("O1", [("b", 0.6), ("a", 0.4)]);
        let s2 = WaveFunction::from_probabilities("O2", [("c", 0.5), ("b", 0.5)]);
        let s3 = WaveFunction::from_probabilities("O3", [("c", 0.9), ("a", 0.1)]);
        let family = [
            PossibilityContext::new(s1, "b", TOL).unwrap(),
            PossibilityContext::new(s2, "c", TOL).unwrap(),
            PossibilityContext::new(s3.clone(), "c", TOL).unwrap(),
        ];
        let r = check_relation_axioms(&family);
        assert_eq!(r.transitivity.violations, transitivity_by_triples(&family));
        assert!(r.transitivity.holds);

        let broken = [family[0].clone(), family[1].clone()];
        let r = check_relation_axioms(&broken);
        assert_eq!(r.transitivity.violations, transitivity_by_triples(&broken));
        assert_eq!(r.transitivity.counterexamples, vec![vec!["a", "b", "c"]]);
    }

    fn context() -> impl Strategy<Value = PossibilityContext> {
        (
            prop::collection::vec(
                prop_oneof![1 => Just(0.0), 1 => Just(0.25), 6 => 0.0f64..1.0],
                1..=12,
            ),
            any::<prop::sample::Index>(),
        )
            .prop_filter("mass", |(w, _)| w.iter().sum::<f64>() > 0.1)
            .prop_map(|(w, idx)| {
                let total: f64 = w.iter().sum();
                let wf = probs(&w.iter().map(|x| x / total).collect::<Vec<_>>());
                let live: Vec<String> = wf
                    .branches
                    .iter()
                    .filter(|b| b.born_probability() > TOL.eps_zero)
                    .map(|b| b.label.clone())
                    .collect();
                let realized = idx.get(&live).clone();
                PossibilityContext::new(wf, &realized, TOL).unwrap()
            })
    }

    proptest! {
        #[test]
        fn realized_is_never_possible(c in context()) {
            prop_assert!(!c.is_possible_for(c.realized_label()).unwrap());
        }

        #[test]
        fn possible_realized_absurd_partition(c in context()) {
            for l in c.source().labels() {
                let possible = c.is_possible_for(l).unwrap();
                let absurd = c.classify_absurd(l).unwrap();
                let realized = l == c.realized_label();
                prop_assert_eq!(possible as u8 + absurd as u8 + realized as u8, 1);
            }
        }

        #[test]
        fn grade_is_total_preorder(c in context()) {
            let labels: Vec<&str> = c.possible_labels().collect();
            for a in &labels {
                prop_assert_eq!(c.more_possible(a, a).unwrap(), Grade::SameGrade);
                for b in &labels {
                    let ab = c.more_possible(a, b).unwrap();
                    prop_assert_eq!(ab, c.more_possible(b, a).unwrap().reverse());
                    for d in &labels {
                        let bd = c.more_possible(b, d).unwrap();
                        let ad = c.more_possible(a, d).unwrap();
                        if ab == Grade::MorePossible && bd == Grade::MorePossible {
                            prop_assert_eq!(ad, Grade::MorePossible);
                        }
                        if ab == Grade::SameGrade && bd == Grade::SameGrade {
                            prop_assert_eq!(ad, Grade::SameGrade);
                        }
                    }
                }
            }
        }

        #[test]
        fn ordering_partitions_possible_labels(c in context()) {
            let o = c.grade_ordering();
            let mut got: Vec<&str> = o.labels().collect();
            let mut want: Vec<&str> = c.possible_labels().collect();
            got.sort_unstable();
            want.sort_unstable();
            prop_assert_eq!(got, want);
            for w in o.classes.windows(2) {
                prop_assert!(w[0].probability - w[1].probability > TOL.eps_grade);
            }
        }

        #[test]
        fn bounds_enclose_every_label(c in context()) {
            let o = c.grade_ordering();
            match o.bounds() {
                Err(e) => {
                    prop_assert_eq!(e, Error::EmptyOrdering);
                    prop_assert_eq!(c.possible_labels().count(), 0);
                }
                Ok(b) => {
                    for l in o.labels() {
                        prop_assert_ne!(c.more_possible(&b.upper[0], l).unwrap(), Grade::LessPossible);
                        prop_assert_ne!(c.more_possible(l, &b.lower[0]).unwrap(), Grade::LessPossible);
                    }
                }
            }
        }

        #[test]
        fn ordering_ignores_phase_and_labels(c in context(), theta in 0.0f64..std::f64::consts::TAU) {
            let rotated = PossibilityContext::new(c.source().with_global_phase(theta), c.realized_label(), TOL).unwrap();
            let shape = |o: &GradeOrdering| o.classes.iter().map(|k| k.labels.clone()).collect::<Vec<_>>();
            prop_assert_eq!(shape(&c.grade_ordering()), shape(&rotated.grade_ordering()));

            let mut renamed = c.source().clone();
            for b in &mut renamed.branches {
                b.label = format!("x_{}", b.label);
            }
            let renamed = PossibilityContext::new(renamed, &format!("x_{}", c.realized_label()), TOL).unwrap();
            let strip = |o: &GradeOrdering| o.classes.iter()
                .map(|k| k.labels.iter().map(|l| l.trim_start_matches("x_").to_owned()).collect::<Vec<_>>())
                .collect::<Vec<_>>();
            prop_assert_eq!(shape(&c.grade_ordering()), strip(&renamed.grade_ordering()));
        }

        #[test]
        fn single_contexts_satisfy_axioms(c in context()) {
            prop_assert!(check_relation_axioms(std::slice::from_ref(&c)).all_hold());
        }
    }
}
