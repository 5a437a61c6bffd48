//! The `.qpd` scenario format.
//!
//! ```text
//! # comments run to the end of the line
//! state w { a: 0.6 @ 1; b: 0.8i @ -1 }
//! measure m1 on w seed 42
//! measure m2 on w at m1:b force a
//! family f = [w]
//! query q in f = nec not abs(a)
//! verify w
//! grade m1
//! axioms
//! ```
//!
//! Amplitudes are `re`, `re±im i` or `im i` in decimal with an optional
//! exponent. States whose squared amplitudes do not sum to 1 are normalized
//! and a [`Warning`] is emitted. [`print`] produces the canonical form;
//! parsing it yields a structurally equal [`Scenario`].

mod lexer;
mod parser;
mod printer;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lexer::{tokenize, Span, Tok, Token};
pub use parser::MAX_DEPTH;
pub use printer::print;

use crate::graph::VertexId;
use crate::modal::ModalFormula;
use crate::state::{Violation, WaveFunction};
use crate::tolerance::Tolerances;
use parser::{Parser, Spans};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    /// Each state's name is its `observable_name`.
    pub states: Vec<WaveFunction>,
    pub script: Vec<MeasureStep>,
    pub families: Vec<FamilyDecl>,
    pub queries: Vec<Query>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureStep {
    pub id: String,
    pub state: String,
    pub attach: Option<VertexId>,
    pub mode: MeasureMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureMode {
    Seed(u64),
    Force(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDecl {
    pub name: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    Formula {
        name: String,
        family: Option<String>,
        formula: ModalFormula,
    },
    Verify(String),
    Grade(String),
    Axioms,
}

impl Scenario {
    pub fn state(&self, name: &str) -> Option<&WaveFunction> {
        self.states.iter().find(|s| s.observable_name == name)
    }

    pub fn step(&self, id: &str) -> Option<&MeasureStep> {
        self.script.iter().find(|s| s.id == id)
    }

    pub fn family(&self, name: &str) -> Option<&FamilyDecl> {
        self.families.iter().find(|f| f.name == name)
    }

    /// Member names of the family a formula query runs against: the named
    /// one, the only declared one, or every state when none is declared.
    pub fn query_family(&self, family: Option<&str>) -> Result<(String, Vec<String>), String> {
        match family {
            Some(name) => self
                .family(name)
                .map(|f| (f.name.clone(), f.members.clone()))
                .ok_or_else(|| format!("unknown family `{name}`")),
            None => match self.families.as_slice() {
                [] => Ok((
                    "all".to_owned(),
                    self.states
                        .iter()
                        .map(|s| s.observable_name.clone())
                        .collect(),
                )),
                [only] => Ok((only.name.clone(), only.members.clone())),
                _ => Err("several families are declared; name one with `in`".to_owned()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    /// The offending token as written.
    pub found: String,
    pub expected: Vec<String>,
    pub depth_exceeded: bool,
}

impl ParseError {
    /// The description without its position.
    pub fn message(&self) -> String {
        if self.depth_exceeded {
            return format!(
                "formula nested deeper than {MAX_DEPTH} levels at `{}`",
                self.found
            );
        }
        let mut m = format!("unexpected `{}`", self.found);
        match self.expected.as_slice() {
            [] => {}
            [one] => m.push_str(&format!(", expected {one}")),
            many => m.push_str(&format!(", expected one of {}", many.join(", "))),
        }
        m
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolveKind {
    DuplicateState,
    DuplicateLabel,
    DuplicateMeasurement,
    DuplicateFamily,
    DuplicateQuery,
    EmptyState,
    ZeroState,
    EmptyFamily,
    UnknownState,
    UnknownMeasurement,
    UnknownLabel,
    UnknownFamily,
    UnknownAtomLabel,
    LaterMeasurement,
    AmbiguousFamily,
}

impl fmt::Display for ResolveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResolveKind::DuplicateState => "state declared twice",
            ResolveKind::DuplicateLabel => "label repeated within a state",
            ResolveKind::DuplicateMeasurement => "measurement id used twice",
            ResolveKind::DuplicateFamily => "family declared twice",
            ResolveKind::DuplicateQuery => "query name used twice",
            ResolveKind::EmptyState => "state has no branches",
            ResolveKind::ZeroState => "every amplitude of the state is zero",
            ResolveKind::EmptyFamily => "family has no members",
            ResolveKind::UnknownState => "unknown state",
            ResolveKind::UnknownMeasurement => "unknown measurement",
            ResolveKind::UnknownLabel => "unknown branch label",
            ResolveKind::UnknownFamily => "unknown family",
            ResolveKind::UnknownAtomLabel => "label not mentioned by any family member",
            ResolveKind::LaterMeasurement => "attach point must be an earlier measurement",
            ResolveKind::AmbiguousFamily => "several families are declared; name one with `in`",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}: `{name}`")]
pub struct ResolveError {
    pub line: usize,
    pub column: usize,
    pub name: String,
    pub kind: ResolveKind,
}

impl ResolveError {
    pub fn message(&self) -> String {
        format!("{}: `{}`", self.kind, self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{}:{}: parse error: {}", .0.line, .0.column, .0.message())]
    Parse(ParseError),
    #[error("{}:{}: resolve error: {}", .0.line, .0.column, .0.message())]
    Resolve(ResolveError),
}

impl DslError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            DslError::Parse(e) => (e.line, e.column),
            DslError::Resolve(e) => (e.line, e.column),
        }
    }

    /// `parse error: ...` or `resolve error: ...`, without the position.
    pub fn message(&self) -> String {
        match self {
            DslError::Parse(e) => format!("parse error: {}", e.message()),
            DslError::Resolve(e) => format!("resolve error: {}", e.message()),
        }
    }

    /// The token the error is about.
    pub fn token(&self) -> &str {
        match self {
            DslError::Parse(e) => &e.found,
            DslError::Resolve(e) => &e.name,
        }
    }
}

/// Every error found in one document, in source order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct Diagnostics(pub Vec<DslError>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Warning {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: warning: {}",
            self.line, self.column, self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub scenario: Scenario,
    pub warnings: Vec<Warning>,
}

/// Parses and resolves a scenario with default tolerances.
pub fn parse(src: &str) -> Result<Parsed, Diagnostics> {
    parse_with(src, &Tolerances::DEFAULT)
}

pub fn parse_with(src: &str, tol: &Tolerances) -> Result<Parsed, Diagnostics> {
    let (scenario, spans, errors) = Parser::new(src).run();
    if !errors.is_empty() {
        return Err(Diagnostics(
            errors.into_iter().map(DslError::Parse).collect(),
        ));
    }
    Resolver {
        tol,
        spans: &spans,
        errors: Vec::new(),
        warnings: Vec::new(),
    }
    .resolve(scenario)
}

/// Canonical text of `scenario`.
pub fn round_trip(scenario: &Scenario) -> String {
    print(scenario)
}

struct Resolver<'a> {
    tol: &'a Tolerances,
    spans: &'a Spans,
    errors: Vec<DslError>,
    warnings: Vec<Warning>,
}

impl Resolver<'_> {
    fn err(&mut self, span: Span, name: &str, kind: ResolveKind) {
        self.errors.push(DslError::Resolve(ResolveError {
            line: span.line,
            column: span.column,
            name: name.to_owned(),
            kind,
        }));
    }

    fn resolve(mut self, mut sc: Scenario) -> Result<Parsed, Diagnostics> {
        self.states(&mut sc);
        self.script(&sc);
        self.families(&sc);
        self.queries(&sc);
        if self.errors.is_empty() {
            Ok(Parsed {
                scenario: sc,
                warnings: self.warnings,
            })
        } else {
            self.errors.sort_by_key(DslError::position);
            Err(Diagnostics(self.errors))
        }
    }

    fn states(&mut self, sc: &mut Scenario) {
        let spans = self.spans;
        let mut names = HashSet::new();
        for (i, wf) in sc.states.iter_mut().enumerate() {
            let span = spans.states[i];
            if !names.insert(wf.observable_name.clone()) {
                self.err(span, &wf.observable_name, ResolveKind::DuplicateState);
            }
            let mut clean = true;
            for v in wf.validate(self.tol) {
                match v {
                    Violation::NoBranches => {
                        self.err(span, &wf.observable_name, ResolveKind::EmptyState);
                        clean = false;
                    }
                    Violation::DuplicateLabel(l) => {
                        let at = wf
                            .branches
                            .iter()
                            .enumerate()
                            .filter(|(_, b)| b.label == l)
                            .nth(1)
                            .map_or(span, |(j, _)| spans.branches[i][j]);
                        self.err(at, &l, ResolveKind::DuplicateLabel);
                        clean = false;
                    }
                    // The lexer only produces finite literals.
                    Violation::NonFinite(_) | Violation::NotNormalized(_) => {}
                }
            }
            if !clean {
                continue;
            }
            if !wf.is_normalized(self.tol) {
                let total = wf.total_probability();
                match wf.normalize(self.tol) {
                    Ok(n) => {
                        *wf = n;
                        self.warnings.push(Warning {
                            line: span.line,
                            column: span.column,
                            message: format!(
                                "state `{}` has Σ|c|² = {total}; amplitudes were normalized",
                                wf.observable_name
                            ),
                        });
                    }
                    Err(_) => self.err(span, &wf.observable_name, ResolveKind::ZeroState),
                }
            }
        }
    }

    fn script(&mut self, sc: &Scenario) {
        let spans = self.spans;
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for (i, step) in sc.script.iter().enumerate() {
            let sp = &spans.measures[i];
            if seen.contains_key(step.id.as_str()) {
                self.err(sp.id, &step.id, ResolveKind::DuplicateMeasurement);
            }
            let state = sc.state(&step.state);
            if state.is_none() {
                self.err(sp.state, &step.state, ResolveKind::UnknownState);
            }
            if let (MeasureMode::Force(label), Some(wf)) = (&step.mode, state) {
                if wf.branch(label).is_none() {
                    self.err(sp.force.unwrap_or(sp.id), label, ResolveKind::UnknownLabel);
                }
            }
            if let Some(at) = &step.attach {
                let (s_step, s_label) = (
                    sp.attach_step.unwrap_or(sp.id),
                    sp.attach_label.unwrap_or(sp.id),
                );
                match seen.get(at.measurement_id.as_str()) {
                    Some(&j) => {
                        let parent = sc.state(&sc.script[j].state);
                        if parent.is_some_and(|p| p.branch(&at.label).is_none()) {
                            self.err(s_label, &at.label, ResolveKind::UnknownLabel);
                        }
                    }
                    None if sc.step(&at.measurement_id).is_some() => {
                        self.err(s_step, &at.measurement_id, ResolveKind::LaterMeasurement)
                    }
                    None => self.err(s_step, &at.measurement_id, ResolveKind::UnknownMeasurement),
                }
            }
            seen.entry(&step.id).or_insert(i);
        }
    }

    fn families(&mut self, sc: &Scenario) {
        let spans = self.spans;
        let mut names = HashSet::new();
        for (i, fam) in sc.families.iter().enumerate() {
            let (name_span, member_spans) = &spans.families[i];
            if !names.insert(fam.name.as_str()) {
                self.err(*name_span, &fam.name, ResolveKind::DuplicateFamily);
            }
            if fam.members.is_empty() {
                self.err(*name_span, &fam.name, ResolveKind::EmptyFamily);
            }
            for (m, s) in fam.members.iter().zip(member_spans) {
                if sc.state(m).is_none() {
                    self.err(*s, m, ResolveKind::UnknownState);
                }
            }
        }
    }

    fn queries(&mut self, sc: &Scenario) {
        let spans = self.spans;
        let mut names = HashSet::new();
        for (i, q) in sc.queries.iter().enumerate() {
            let sp = &spans.queries[i];
            match q {
                Query::Formula {
                    name,
                    family,
                    formula,
                } => {
                    if !names.insert(name.as_str()) {
                        self.err(sp.name, name, ResolveKind::DuplicateQuery);
                    }
                    let members = match sc.query_family(family.as_deref()) {
                        Ok((_, members)) => members,
                        Err(_) => {
                            let (span, token, kind) = match family {
                                Some(f) => (
                                    sp.target.unwrap_or(sp.name),
                                    f.as_str(),
                                    ResolveKind::UnknownFamily,
                                ),
                                None => (sp.name, name.as_str(), ResolveKind::AmbiguousFamily),
                            };
                            self.err(span, token, kind);
                            continue;
                        }
                    };
                    let vocab: HashSet<&str> = members
                        .iter()
                        .filter_map(|m| sc.state(m))
                        .flat_map(|s| s.labels())
                        .collect();
                    for l in formula.labels() {
                        if !vocab.contains(l) {
                            let span = sp.labels.get(l).copied().unwrap_or(sp.name);
                            self.err(span, l, ResolveKind::UnknownAtomLabel);
                        }
                    }
                }
                Query::Verify(state) => {
                    if sc.state(state).is_none() {
                        self.err(sp.name, state, ResolveKind::UnknownState);
                    }
                }
                Query::Grade(id) => {
                    if sc.step(id).is_none() {
                        self.err(sp.name, id, ResolveKind::UnknownMeasurement);
                    }
                }
                Query::Axioms => {}
            }
        }
    }
}
