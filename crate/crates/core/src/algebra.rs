//! Exhaustive checks of order-theoretic and Boolean claims about the
//! probability carrier `{|c_1|², …, |c_n|²}` of a wavefunction.
//!
//! The carrier is ordered by grade of possibility (plain `≤` on
//! probabilities). Same-grade values are merged into one carrier element
//! before any order-theoretic check. Meet and join are `min` and `max`,
//! complement is `p ↦ 1 − p`, and the Boolean signature `⟨carrier, ¬, +, 0, 1⟩`
//! reads `+` as `max` and `0`, `1` as literal carrier elements. Nothing is
//! assumed: every claim is checked over all pairs and triples, and each
//! failure carries a counterexample that [`Counterexample::replay`] can
//! re-violate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::WaveFunction;
use crate::tolerance::Tolerances;

/// The multiset of Born probabilities of one state, most possible first.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilitySet {
    values: Vec<f64>,
    carrier: Vec<f64>,
    tol: Tolerances,
}

impl ProbabilitySet {
    pub fn new(mut values: Vec<f64>, tol: Tolerances) -> Result<Self> {
        if values.len() > tol.algebra_cap {
            return Err(Error::CarrierTooLarge {
                len: values.len(),
                cap: tol.algebra_cap,
            });
        }
        for &v in &values {
            if !(0.0..=1.0 + tol.eps_norm).contains(&v) {
                return Err(Error::ProbabilityOutOfRange(v));
            }
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > tol.eps_norm {
            return Err(Error::CarrierNotNormalized(total));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        let mut carrier: Vec<f64> = Vec::new();
        let mut prev: Option<f64> = None;
        for &v in &values {
            if !prev.is_some_and(|p| tol.same_grade(p, v)) {
                carrier.push(v);
            }
            prev = Some(v);
        }
        Ok(Self {
            values,
            carrier,
            tol,
        })
    }

    pub fn from_wavefunction(wf: &WaveFunction, tol: Tolerances) -> Result<Self> {
        wf.ensure_valid(&tol)?;
        Self::new(wf.probabilities(), tol)
    }

    /// Every probability, descending, duplicates kept.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// One representative per same-grade class, descending.
    pub fn carrier(&self) -> &[f64] {
        &self.carrier
    }

    pub fn contains(&self, p: f64) -> bool {
        self.carrier.iter().any(|&c| self.tol.same_grade(c, p))
    }

    fn leq(&self, a: f64, b: f64) -> bool {
        a <= b || self.tol.same_grade(a, b)
    }

    fn eq(&self, a: f64, b: f64) -> bool {
        self.tol.same_grade(a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    WellOrder,
    HasInfimum,
    HasSupremum,
    PairwiseMinSup,
    Lattice,
    Orthocomplemented,
    Distributive,
    BooleanAlgebra,
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::WellOrder,
        Claim::HasInfimum,
        Claim::HasSupremum,
        Claim::PairwiseMinSup,
        Claim::Lattice,
        Claim::Orthocomplemented,
        Claim::Distributive,
        Claim::BooleanAlgebra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::WellOrder => "well_order",
            Claim::HasInfimum => "has_infimum",
            Claim::HasSupremum => "has_supremum",
            Claim::PairwiseMinSup => "pairwise_min_sup",
            Claim::Lattice => "lattice",
            Claim::Orthocomplemented => "orthocomplemented",
            Claim::Distributive => "distributive",
            Claim::BooleanAlgebra => "boolean_algebra",
        }
    }
}

/// A single law, checkable on concrete carrier values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Totality,
    Antisymmetry,
    LeastElement,
    GreatestElement,
    MeetInCarrier,
    JoinInCarrier,
    MeetCommutes,
    JoinCommutes,
    MeetAssociates,
    JoinAssociates,
    MeetIdempotent,
    JoinIdempotent,
    AbsorbMeet,
    AbsorbJoin,
    ComplementInCarrier,
    ComplementInvolutive,
    ComplementAntitone,
    MeetDistributes,
    JoinDistributes,
    ZeroInCarrier,
    OneInCarrier,
    JoinComplement,
    MeetComplement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub law: Law,
    pub values: Vec<f64>,
}

impl Counterexample {
    /// Re-evaluates the law on the recorded values; `true` means it is
    /// violated again.
    pub fn replay(&self, ps: &ProbabilitySet) -> bool {
        !law_holds(ps, self.law, &self.values)
    }
}

fn min(a: f64, b: f64) -> f64 {
    a.min(b)
}

fn max(a: f64, b: f64) -> f64 {
    a.max(b)
}

fn law_holds(ps: &ProbabilitySet, law: Law, v: &[f64]) -> bool {
    let c = &ps.carrier;
    match (law, v) {
        (Law::Totality, &[a, b]) => ps.leq(a, b) || ps.leq(b, a),
        (Law::Antisymmetry, &[a, b]) => !(ps.leq(a, b) && ps.leq(b, a)) || ps.eq(a, b),
        (Law::LeastElement, _) => c.iter().any(|&m| c.iter().all(|&x| ps.leq(m, x))),
        (Law::GreatestElement, _) => c.iter().any(|&m| c.iter().all(|&x| ps.leq(x, m))),
        (Law::MeetInCarrier, &[a, b]) => ps.contains(min(a, b)),
        (Law::JoinInCarrier, &[a, b]) => ps.contains(max(a, b)),
        (Law::MeetCommutes, &[a, b]) => ps.eq(min(a, b), min(b, a)),
        (Law::JoinCommutes, &[a, b]) => ps.eq(max(a, b), max(b, a)),
        (Law::MeetAssociates, &[a, b, d]) => ps.eq(min(a, min(b, d)), min(min(a, b), d)),
        (Law::JoinAssociates, &[a, b, d]) => ps.eq(max(a, max(b, d)), max(max(a, b), d)),
        (Law::MeetIdempotent, &[a]) => ps.eq(min(a, a), a),
        (Law::JoinIdempotent, &[a]) => ps.eq(max(a, a), a),
        (Law::AbsorbMeet, &[a, b]) => ps.eq(min(a, max(a, b)), a),
        (Law::AbsorbJoin, &[a, b]) => ps.eq(max(a, min(a, b)), a),
        (Law::ComplementInCarrier, &[p]) => ps.contains(1.0 - p),
        (Law::ComplementInvolutive, &[p]) => ps.eq(1.0 - (1.0 - p), p),
        (Law::ComplementAntitone, &[a, b]) => !ps.leq(a, b) || ps.leq(1.0 - b, 1.0 - a),
        (Law::MeetDistributes, &[a, b, d]) => ps.eq(min(a, max(b, d)), max(min(a, b), min(a, d))),
        (Law::JoinDistributes, &[a, b, d]) => ps.eq(max(a, min(b, d)), min(max(a, b), max(a, d))),
        (Law::ZeroInCarrier, _) => ps.contains(0.0),
        (Law::OneInCarrier, _) => ps.contains(1.0),
        (Law::JoinComplement, &[p]) => ps.eq(max(p, 1.0 - p), 1.0),
        (Law::MeetComplement, &[p]) => ps.eq(min(p, 1.0 - p), 0.0),
        // Wrong arity: the counterexample does not describe this law.
        _ => true,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "counterexample", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails(Counterexample),
    Vacuous,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Fails(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Vacuous => f.write_str("vacuous"),
            Verdict::Fails(c) => {
                let vals: Vec<String> = c.values.iter().map(|v| v.to_string()).collect();
                write!(f, "fails({})", vals.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim: Claim,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub values: Vec<f64>,
    pub carrier: Vec<f64>,
    pub claims: Vec<ClaimResult>,
}

impl AlgebraReport {
    pub fn get(&self, claim: Claim) -> &ClaimResult {
        self.claims
            .iter()
            .find(|c| c.claim == claim)
            .expect("every claim receives a verdict")
    }

    pub fn verdict(&self, claim: Claim) -> &Verdict {
        &self.get(claim).verdict
    }
}

/// First violation of `laws` over the given tuples, in carrier order.
struct Search<'a> {
    ps: &'a ProbabilitySet,
}

impl Search<'_> {
    fn unary(&self, laws: &[Law]) -> Option<Counterexample> {
        for &a in &self.ps.carrier {
            for &law in laws {
                if !law_holds(self.ps, law, &[a]) {
                    return Some(Counterexample {
                        law,
                        values: vec![a],
                    });
                }
            }
        }
        None
    }

    fn binary(&self, laws: &[Law]) -> Option<Counterexample> {
        for &a in &self.ps.carrier {
            for &b in &self.ps.carrier {
                for &law in laws {
                    if !law_holds(self.ps, law, &[a, b]) {
                        return Some(Counterexample {
                            law,
                            values: vec![a, b],
                        });
                    }
                }
            }
        }
        None
    }

    fn ternary(&self, laws: &[Law]) -> Option<Counterexample> {
        let c = &self.ps.carrier;
        for &a in c {
            for &b in c {
                for &d in c {
                    for &law in laws {
                        if !law_holds(self.ps, law, &[a, b, d]) {
                            return Some(Counterexample {
                                law,
                                values: vec![a, b, d],
                            });
                        }
                    }
                }
            }
        }
        None
    }

    /// The witness is the element missing from the carrier.
    fn nullary(&self, law: Law) -> Option<Counterexample> {
        let missing = if law == Law::OneInCarrier { 1.0 } else { 0.0 };
        (!law_holds(self.ps, law, &[])).then_some(Counterexample {
            law,
            values: vec![missing],
        })
    }
}

fn verdict_of(found: Option<Counterexample>) -> Verdict {
    found.map_or(Verdict::Holds, Verdict::Fails)
}

fn tie_note(ps: &ProbabilitySet) -> Option<String> {
    let ties: Vec<String> = ps
        .carrier
        .iter()
        .filter_map(|&c| {
            let n = ps
                .values
                .iter()
                .filter(|&&v| ps.tol.same_grade(v, c))
                .count();
            (n > 1).then(|| format!("{c}×{n}"))
        })
        .collect();
    (!ties.is_empty()).then(|| {
        format!(
            "well-ordered up to same-grade classes; ties: {}",
            ties.join(", ")
        )
    })
}

/// Well-ordering by grade. Finite total orders are always well-ordered, so
/// this holds for every carrier with at least two values, and is vacuous for
/// a single-branch state where there is nothing to order.
pub fn well_order_check(ps: &ProbabilitySet) -> ClaimResult {
    if ps.values.len() < 2 {
        return ClaimResult {
            claim: Claim::WellOrder,
            verdict: Verdict::Vacuous,
            note: Some("fewer than two values to order".into()),
        };
    }
    let s = Search { ps };
    let found = s.binary(&[Law::Totality, Law::Antisymmetry]);
    ClaimResult {
        claim: Claim::WellOrder,
        verdict: verdict_of(found),
        note: tie_note(ps),
    }
}

/// Checks every claim over `ps`.
pub fn verify(ps: &ProbabilitySet) -> AlgebraReport {
    let s = Search { ps };
    let result = |claim, found: Option<Counterexample>, note: Option<String>| ClaimResult {
        claim,
        verdict: verdict_of(found),
        note,
    };

    let well_order = well_order_check(ps);
    let infimum = result(
        Claim::HasInfimum,
        s.nullary(Law::LeastElement),
        ps.carrier.last().map(|v| format!("infimum {v}")),
    );
    let supremum = result(
        Claim::HasSupremum,
        s.nullary(Law::GreatestElement),
        ps.carrier.first().map(|v| format!("supremum {v}")),
    );
    let pairwise = result(
        Claim::PairwiseMinSup,
        s.binary(&[Law::MeetInCarrier, Law::JoinInCarrier]),
        None,
    );
    let lattice = result(
        Claim::Lattice,
        s.unary(&[Law::MeetIdempotent, Law::JoinIdempotent])
            .or_else(|| {
                s.binary(&[
                    Law::MeetInCarrier,
                    Law::JoinInCarrier,
                    Law::MeetCommutes,
                    Law::JoinCommutes,
                    Law::AbsorbMeet,
                    Law::AbsorbJoin,
                ])
            })
            .or_else(|| s.ternary(&[Law::MeetAssociates, Law::JoinAssociates])),
        None,
    );
    let ortho = result(
        Claim::Orthocomplemented,
        s.unary(&[Law::ComplementInCarrier, Law::ComplementInvolutive])
            .or_else(|| s.binary(&[Law::ComplementAntitone])),
        Some("complement p ↦ 1 − p".into()),
    );
    let distributive = result(
        Claim::Distributive,
        s.ternary(&[Law::MeetDistributes, Law::JoinDistributes]),
        None,
    );

    let prerequisites = [&lattice, &ortho, &distributive];
    let boolean = match prerequisites
        .iter()
        .find_map(|r| r.verdict.counterexample())
    {
        Some(c) => ClaimResult {
            claim: Claim::BooleanAlgebra,
            verdict: Verdict::Fails(c.clone()),
            note: Some("a prerequisite claim fails".into()),
        },
        None => result(
            Claim::BooleanAlgebra,
            s.nullary(Law::ZeroInCarrier)
                .or_else(|| s.nullary(Law::OneInCarrier))
                .or_else(|| s.binary(&[Law::JoinInCarrier]))
                .or_else(|| s.unary(&[Law::JoinComplement, Law::MeetComplement])),
            Some("¬p = 1 − p, + = max, · = min".into()),
        ),
    };

    AlgebraReport {
        values: ps.values.clone(),
        carrier: ps.carrier.clone(),
        claims: vec![
            well_order,
            infimum,
            supremum,
            pairwise,
            lattice,
            ortho,
            distributive,
            boolean,
        ],
    }
}
