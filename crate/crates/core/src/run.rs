//! Executes a resolved [`Scenario`] and collects everything it asked for.

use serde::{Deserialize, Serialize};

use crate::algebra::{self, AlgebraReport, ProbabilitySet};
use crate::collapse::{collapse_forced, collapse_random, CollapseRecord};
use crate::dsl::{MeasureMode, Query, Scenario, Warning};
use crate::error::{Error, Result};
use crate::graph::BranchGraph;
use crate::modal::{self, ContextFamily, Evaluation};
use crate::possibility::{
    check_relation_axioms, AxiomReport, Bounds, GradeOrdering, PossibilityContext,
};
use crate::tolerance::Tolerances;

pub const SCHEMA_VERSION: &str = "branchlab.run-report/1";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Replaces the seed of every `seed` step.
    pub seed_override: Option<u64>,
    pub tol: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: String,
    pub scenario: String,
    pub tolerances: Tolerances,
    pub warnings: Vec<Warning>,
    pub steps: Vec<StepReport>,
    pub gradings: Vec<GradingReport>,
    pub queries: Vec<QueryReport>,
    pub algebra: Vec<StateAlgebra>,
    pub axioms: Option<AxiomsReport>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    #[serde(flatten)]
    pub record: CollapseRecord,
    /// Parent vertex, `measurement:label`, if the step was chained.
    pub attach: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradingReport {
    pub measurement_id: String,
    pub ordering: GradeOrdering,
    /// Absent when no branch is possible relative to the realized one.
    pub bounds: Option<Bounds>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryReport {
    pub name: String,
    pub family: String,
    pub members: Vec<String>,
    #[serde(flatten)]
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateAlgebra {
    pub state: String,
    #[serde(flatten)]
    pub report: AlgebraReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomsReport {
    /// The relation induced by all measurements together.
    pub combined: AxiomReport,
    pub per_measurement: Vec<MeasurementAxioms>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementAxioms {
    pub measurement_id: String,
    #[serde(flatten)]
    pub report: AxiomReport,
}

#[derive(Debug, Clone)]
pub struct Execution {
    pub report: RunReport,
    pub graph: BranchGraph,
    pub contexts: Vec<PossibilityContext>,
}

/// Runs `scenario`. `name` only labels the report.
pub fn run(
    scenario: &Scenario,
    name: &str,
    warnings: &[Warning],
    opts: &RunOptions,
) -> Result<Execution> {
    let tol = opts.tol;
    let mut graph = BranchGraph::new(tol);
    let mut steps = Vec::new();
    let mut contexts = Vec::new();

    for step in &scenario.script {
        let wf = scenario
            .state(&step.state)
            .ok_or_else(|| Error::UnknownLabel(step.state.clone()))?;
        let record = match &step.mode {
            MeasureMode::Seed(s) => {
                collapse_random(wf, &step.id, opts.seed_override.unwrap_or(*s), &tol)?
            }
            MeasureMode::Force(l) => collapse_forced(wf, &step.id, l, &tol)?,
        };
        graph = graph.extend(&record, wf, step.attach.as_ref())?;
        contexts.push(PossibilityContext::from_record(wf, &record, tol)?);
        steps.push(StepReport {
            record,
            attach: step.attach.as_ref().map(ToString::to_string),
        });
    }

    let context_of = |id: &str| {
        scenario
            .script
            .iter()
            .position(|s| s.id == id)
            .map(|i| &contexts[i])
            .ok_or_else(|| Error::UnknownVertex(id.to_owned()))
    };

    let mut gradings = Vec::new();
    let mut queries = Vec::new();
    let mut algebra = Vec::new();
    let mut axioms = None;
    for q in &scenario.queries {
        match q {
            Query::Formula {
                name,
                family,
                formula,
            } => {
                let (fname, members) = scenario
                    .query_family(family.as_deref())
                    .map_err(|_| Error::EmptyFamily)?;
                let wfs = members
                    .iter()
                    .map(|m| {
                        scenario
                            .state(m)
                            .cloned()
                            .ok_or_else(|| Error::UnknownLabel(m.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let fam = ContextFamily::new(fname.clone(), wfs, tol)?;
                queries.push(QueryReport {
                    name: name.clone(),
                    family: fname,
                    members,
                    evaluation: modal::evaluate(&fam, formula)?,
                });
            }
            Query::Verify(state) => {
                let wf = scenario
                    .state(state)
                    .ok_or_else(|| Error::UnknownLabel(state.clone()))?;
                let ps = ProbabilitySet::from_wavefunction(wf, tol)?;
                algebra.push(StateAlgebra {
                    state: state.clone(),
                    report: algebra::verify(&ps),
                });
            }
            Query::Grade(id) => {
                let ordering = context_of(id)?.grade_ordering();
                gradings.push(GradingReport {
                    measurement_id: id.clone(),
                    bounds: ordering.bounds().ok(),
                    ordering,
                });
            }
            Query::Axioms => {
                axioms = Some(AxiomsReport {
                    combined: check_relation_axioms(&contexts),
                    per_measurement: scenario
                        .script
                        .iter()
                        .zip(&contexts)
                        .map(|(s, c)| MeasurementAxioms {
                            measurement_id: s.id.clone(),
                            report: check_relation_axioms(std::slice::from_ref(c)),
                        })
                        .collect(),
                });
            }
        }
    }

    Ok(Execution {
        report: RunReport {
            schema_version: SCHEMA_VERSION.to_owned(),
            scenario: name.to_owned(),
            tolerances: tol,
            warnings: warnings.to_vec(),
            steps,
            gradings,
            queries,
            algebra,
            axioms,
            status: "ok".to_owned(),
        },
        graph,
        contexts,
    })
}
