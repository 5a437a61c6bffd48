//! Plain-text rendering. Carries the same fields as the JSON report.

use std::fmt::Write;

use branchlab::algebra::ClaimResult;
use branchlab::possibility::{AxiomCheck, AxiomReport};
use branchlab::run::{GradingReport, QueryReport, RunReport, StateAlgebra, StepReport};
use branchlab::Verdict;

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "-".to_owned()
    } else {
        items.join(",")
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_owned(), |v| v.to_string())
}

/// Left-aligned columns, two spaces apart, indented by two.
fn grid(out: &mut String, rows: &[Vec<String>]) {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for r in rows {
        let mut line = String::from("  ");
        for (c, cell) in r.iter().enumerate() {
            line.push_str(cell);
            if c + 1 < r.len() {
                let pad = widths[c] - cell.chars().count() + 2;
                line.extend(std::iter::repeat_n(' ', pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
}

fn row<const N: usize>(cells: [&str; N]) -> Vec<String> {
    cells.iter().map(|s| s.to_string()).collect()
}

pub fn steps(out: &mut String, steps: &[StepReport]) {
    let mut rows = vec![row([
        "id",
        "observable",
        "attach",
        "realized",
        "eigenvalue",
        "probability",
        "seed",
        "possible",
        "absurd",
    ])];
    for s in steps {
        let r = &s.record;
        rows.push(vec![
            r.measurement_id.clone(),
            r.observable_name.clone(),
            opt(s.attach.as_ref()),
            r.realized_label.clone(),
            num(r.realized_eigenvalue),
            num(r.realized_probability),
            opt(r.seed_used),
            list(&r.possible_labels),
            list(&r.absurd_labels),
        ]);
    }
    grid(out, &rows);
}

pub fn grading(out: &mut String, g: &GradingReport) {
    let o = &g.ordering;
    let _ = writeln!(
        out,
        "grade {} (observable {}, realized {})",
        g.measurement_id, o.observable_name, o.realized_label
    );
    let mut rows = vec![row(["rank", "probability", "labels"])];
    for (i, c) in o.classes.iter().enumerate() {
        rows.push(vec![
            (i + 1).to_string(),
            num(c.probability),
            list(&c.labels),
        ]);
    }
    match &g.bounds {
        Some(b) => {
            rows.push(vec!["upper".into(), String::new(), list(&b.upper)]);
            rows.push(vec!["lower".into(), String::new(), list(&b.lower)]);
        }
        None => rows.push(row(["bounds", "", "-"])),
    }
    grid(out, &rows);
}

pub fn queries(out: &mut String, qs: &[QueryReport]) {
    let mut rows = vec![row([
        "name",
        "family",
        "members",
        "formula",
        "value",
        "witnesses",
    ])];
    for q in qs {
        rows.push(vec![
            q.name.clone(),
            q.family.clone(),
            list(&q.members),
            q.evaluation.formula.clone(),
            q.evaluation.value.to_string(),
            list(&q.evaluation.witnesses),
        ]);
    }
    grid(out, &rows);
}

fn nums(v: &[f64]) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",")
}

fn claim_row(c: &ClaimResult) -> Vec<String> {
    let (verdict, law) = match &c.verdict {
        Verdict::Fails(ce) => (
            format!("fails({})", nums(&ce.values)),
            serde_json::to_value(ce.law)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default(),
        ),
        v => (v.to_string(), "-".to_owned()),
    };
    vec![
        c.claim.name().to_owned(),
        verdict,
        law,
        c.note.clone().unwrap_or_else(|| "-".to_owned()),
    ]
}

pub fn algebra(out: &mut String, a: &StateAlgebra) {
    let _ = writeln!(out, "verify {}", a.state);
    let _ = writeln!(out, "  values   {}", nums(&a.report.values));
    let _ = writeln!(out, "  carrier  {}", nums(&a.report.carrier));
    let mut rows = vec![row(["claim", "verdict", "law", "note"])];
    rows.extend(a.report.claims.iter().map(claim_row));
    grid(out, &rows);
}

fn check_row(c: &AxiomCheck) -> Vec<String> {
    let ces: Vec<String> = c
        .counterexamples
        .iter()
        .map(|w| format!("({})", w.join(",")))
        .collect();
    vec![
        c.law.clone(),
        c.also_known_as.clone(),
        c.holds.to_string(),
        c.checked.to_string(),
        c.violations.to_string(),
        if ces.is_empty() {
            "-".into()
        } else {
            ces.join(" ")
        },
    ]
}

fn axiom_rows(rows: &mut Vec<Vec<String>>, scope: &str, r: &AxiomReport) {
    for c in [&r.irreflexivity, &r.asymmetry, &r.transitivity] {
        let mut cells = vec![scope.to_owned(), r.relation_size.to_string()];
        cells.extend(check_row(c));
        rows.push(cells);
    }
}

pub fn report(r: &RunReport) -> String {
    let mut out = String::new();
    let t = &r.tolerances;
    let _ = writeln!(out, "scenario        {}", r.scenario);
    let _ = writeln!(out, "schema_version  {}", r.schema_version);
    let _ = writeln!(out, "status          {}", r.status);
    let _ = writeln!(
        out,
        "tolerances      eps_norm={:?} eps_zero={:?} eps_grade={:?} algebra_cap={}",
        t.eps_norm, t.eps_zero, t.eps_grade, t.algebra_cap
    );
    if !r.warnings.is_empty() {
        out.push_str("\nwarnings\n");
        for w in &r.warnings {
            let _ = writeln!(out, "  {}:{}  {}", w.line, w.column, w.message);
        }
    }
    if !r.steps.is_empty() {
        out.push_str("\nsteps\n");
        steps(&mut out, &r.steps);
    }
    for g in &r.gradings {
        out.push('\n');
        grading(&mut out, g);
    }
    if !r.queries.is_empty() {
        out.push_str("\nqueries\n");
        queries(&mut out, &r.queries);
    }
    for a in &r.algebra {
        out.push('\n');
        algebra(&mut out, a);
    }
    if let Some(ax) = &r.axioms {
        out.push_str("\naxioms\n");
        let mut rows = vec![row([
            "scope",
            "pairs",
            "law",
            "also_known_as",
            "holds",
            "checked",
            "violations",
            "counterexamples",
        ])];
        axiom_rows(&mut rows, "combined", &ax.combined);
        for m in &ax.per_measurement {
            axiom_rows(&mut rows, &m.measurement_id, &m.report);
        }
        grid(&mut out, &rows);
    }
    out
}
