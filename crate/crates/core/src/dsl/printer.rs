use std::fmt::Write;

use super::{MeasureMode, Query, Scenario};
use crate::state::Amplitude;

/// Canonical text: states, measurements, families, then queries, one blank
/// line between non-empty sections, LF line endings.
pub fn print(sc: &Scenario) -> String {
    let mut sections: Vec<String> = Vec::new();

    let mut s = String::new();
    for wf in &sc.states {
        let _ = writeln!(s, "state {} {{", wf.observable_name);
        for b in &wf.branches {
            let _ = writeln!(
                s,
                "  {}: {} @ {:?};",
                b.label,
                amplitude(b.amplitude),
                b.eigenvalue
            );
        }
        s.push_str("}\n");
    }
    sections.push(s);

    let mut s = String::new();
    for step in &sc.script {
        let _ = write!(s, "measure {} on {}", step.id, step.state);
        if let Some(at) = &step.attach {
            let _ = write!(s, " at {}:{}", at.measurement_id, at.label);
        }
        let _ = match &step.mode {
            MeasureMode::Seed(n) => writeln!(s, " seed {n}"),
            MeasureMode::Force(l) => writeln!(s, " force {l}"),
        };
    }
    sections.push(s);

    let mut s = String::new();
    for fam in &sc.families {
        let _ = writeln!(s, "family {} = [{}]", fam.name, fam.members.join(", "));
    }
    sections.push(s);

    let mut s = String::new();
    for q in &sc.queries {
        let _ = match q {
            Query::Formula {
                name,
                family: Some(f),
                formula,
            } => writeln!(s, "query {name} in {f} = {formula}"),
            Query::Formula {
                name,
                family: None,
                formula,
            } => writeln!(s, "query {name} = {formula}"),
            Query::Verify(state) => writeln!(s, "verify {state}"),
            Query::Grade(id) => writeln!(s, "grade {id}"),
            Query::Axioms => writeln!(s, "axioms"),
        };
    }
    sections.push(s);

    sections.retain(|s| !s.is_empty());
    sections.join("\n")
}

fn amplitude(a: Amplitude) -> String {
    if a.im == 0.0 {
        format!("{:?}", a.re)
    } else if a.im.is_sign_negative() {
        format!("{:?}-{:?}i", a.re, -a.im)
    } else {
        format!("{:?}+{:?}i", a.re, a.im)
    }
}
