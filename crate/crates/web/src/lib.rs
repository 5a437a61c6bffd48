//! Browser demo. Each export takes plain strings and numbers and returns a
//! JSON string; errors come back as a thrown string.

use branchlab::algebra::{self, AlgebraReport, ProbabilitySet};
use branchlab::collapse::collapse_random;
use branchlab::dsl;
use branchlab::possibility::{Bounds, GradeOrdering};
use branchlab::{collapse_forced, PossibilityContext, Tolerances, WaveFunction};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Most shots one histogram call will draw.
pub const MAX_SHOTS: u32 = 1_000_000;

/// Parses the inside of a `state { ... }` block.
pub fn parse_state(body: &str) -> Result<(WaveFunction, Vec<String>), String> {
    let src = format!("state psi {{\n{body}\n}}\n");
    let parsed = dsl::parse(&src).map_err(|d| {
        // Report positions relative to the user's text, which starts on line 2.
        d.0.iter()
            .map(|e| {
                let (line, col) = e.position();
                format!("{}:{col}: {}", line.saturating_sub(1), e.message())
            })
            .collect::<Vec<_>>()
            .join("\n")
    })?;
    let warnings = parsed.warnings.iter().map(|w| w.message.clone()).collect();
    let wf = parsed
        .scenario
        .states
        .into_iter()
        .next()
        .ok_or("no state")?;
    Ok((wf, warnings))
}

#[derive(Serialize)]
struct Bin {
    label: String,
    probability: f64,
    count: u32,
    frequency: f64,
}

#[derive(Serialize)]
struct Histogram {
    shots: u32,
    warnings: Vec<String>,
    bins: Vec<Bin>,
}

/// `shots` collapses of the state, with seeds `seed`, `seed + 1`, ...
pub fn histogram_json(body: &str, seed: u64, shots: u32) -> Result<String, String> {
    if shots == 0 || shots > MAX_SHOTS {
        return Err(format!("shots must be between 1 and {MAX_SHOTS}"));
    }
    let (wf, warnings) = parse_state(body)?;
    let tol = Tolerances::DEFAULT;
    let mut counts = vec![0u32; wf.len()];
    for k in 0..shots {
        let r = collapse_random(&wf, "m", seed.wrapping_add(u64::from(k)), &tol)
            .map_err(|e| e.to_string())?;
        if let Some(i) = wf.branches.iter().position(|b| b.label == r.realized_label) {
            counts[i] += 1;
        }
    }
    let bins = wf
        .branches
        .iter()
        .zip(counts)
        .map(|(b, count)| Bin {
            label: b.label.clone(),
            probability: b.born_probability(),
            count,
            frequency: f64::from(count) / f64::from(shots),
        })
        .collect();
    Ok(to_json(&Histogram {
        shots,
        warnings,
        bins,
    }))
}

#[derive(Serialize)]
struct Grading {
    warnings: Vec<String>,
    realized: String,
    possible: Vec<String>,
    absurd: Vec<String>,
    deterministic: bool,
    ordering: GradeOrdering,
    bounds: Option<Bounds>,
}

/// Forces `label` and grades the remaining branches.
pub fn grade_json(body: &str, label: &str) -> Result<String, String> {
    let (wf, warnings) = parse_state(body)?;
    let tol = Tolerances::DEFAULT;
    let record = collapse_forced(&wf, "m", label, &tol).map_err(|e| e.to_string())?;
    let ctx = PossibilityContext::from_record(&wf, &record, tol).map_err(|e| e.to_string())?;
    let ordering = ctx.grade_ordering();
    Ok(to_json(&Grading {
        warnings,
        realized: record.realized_label,
        possible: record.possible_labels,
        absurd: record.absurd_labels,
        deterministic: ctx.classify_deterministic(),
        bounds: ordering.bounds().ok(),
        ordering,
    }))
}

/// Checks the algebra claims on a comma- or space-separated probability list.
pub fn verify_json(values: &str) -> Result<String, String> {
    let vals = values
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("not a number: `{s}`")))
        .collect::<Result<Vec<_>, _>>()?;
    let ps = ProbabilitySet::new(vals, Tolerances::DEFAULT).map_err(|e| e.to_string())?;
    let report: AlgebraReport = algebra::verify(&ps);
    Ok(to_json(&report))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("demo types serialize")
}

#[wasm_bindgen]
pub fn histogram(body: &str, seed: u64, shots: u32) -> Result<String, JsValue> {
    histogram_json(body, seed, shots).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn grade(body: &str, label: &str) -> Result<String, JsValue> {
    grade_json(body, label).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn verify(values: &str) -> Result<String, JsValue> {
    verify_json(values).map_err(JsValue::from)
}
