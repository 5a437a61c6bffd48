//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Every check compares the library against an oracle
//! written here from first principles.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use branchlab::algebra::{self, Claim, ProbabilitySet};
use branchlab::collapse::{collapse_forced, collapse_random};
use branchlab::dsl::{self, DslError, FamilyDecl, MeasureMode, MeasureStep, Query, Scenario};
use branchlab::modal::{self, ContextFamily, ModalFormula};
use branchlab::possibility::{check_relation_axioms, Grade, PossibilityContext};
use branchlab::{Amplitude, BranchGraph, EigenBranch, Tolerances, VertexId, WaveFunction};
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

const TOL: Tolerances = Tolerances::DEFAULT;

struct Gen(Xoshiro256StarStar);

impl Gen {
    fn new(seed: u64) -> Self {
        Gen(Xoshiro256StarStar::seed_from_u64(seed))
    }

    fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }

    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len())]
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Amplitudes drawn on a 1/1000 grid with random phases, some of them zero
/// and some repeated so exact ties occur.
fn random_state(g: &mut Gen, name: &str, n: usize) -> WaveFunction {
    let mut mags: Vec<f64> = Vec::with_capacity(n);
    for i in 0..n {
        let m = if g.chance(0.15) {
            0.0
        } else if i > 0 && g.chance(0.2) {
            mags[g.below(i)]
        } else {
            (1 + g.below(1000)) as f64 / 1000.0
        };
        mags.push(m);
    }
    if mags.iter().all(|&m| m == 0.0) {
        mags[g.below(n)] = 0.5;
    }
    let branches = mags
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let phase = [0.0, 0.5, 1.0, 1.5][g.below(4)] * std::f64::consts::PI;
            let a = Amplitude::new(m * phase.cos(), m * phase.sin());
            EigenBranch::new(format!("l{i}"), a, i as f64)
        })
        .collect();
    WaveFunction::new(name, branches).normalize(&TOL).unwrap()
}

fn realizable(wf: &WaveFunction) -> Vec<&str> {
    wf.branches
        .iter()
        .filter(|b| b.born_probability() > TOL.eps_zero)
        .map(|b| b.label.as_str())
        .collect()
}

// 1 ------------------------------------------------------------------------

fn born_frequency() -> Outcome {
    let wf = WaveFunction::from_probabilities("o", [("a", 0.5), ("b", 0.3), ("c", 0.2)]);
    let shots = 100_000u64;
    let start = Instant::now();
    let mut counts: HashMap<String, u64> = HashMap::new();
    for seed in 0..shots {
        let r = collapse_random(&wf, "m", seed, &TOL).unwrap();
        *counts.entry(r.realized_label).or_default() += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    let mut worst: f64 = 0.0;
    let mut freqs = Vec::new();
    for (l, p) in [("a", 0.5), ("b", 0.3), ("c", 0.2)] {
        let f = counts.get(l).copied().unwrap_or(0) as f64 / shots as f64;
        worst = worst.max((f - p).abs());
        freqs.push(format!("{l}={f:.4}"));
    }
    outcome(
        worst <= 0.01 && secs < 5.0,
        format!(
            "{} over {shots} collapses, max |f-p| = {worst:.4} (tol 0.01), {secs:.2} s (limit 5 s)",
            freqs.join(" ")
        ),
    )
}

// 2 ------------------------------------------------------------------------

fn forced_example() -> Outcome {
    let mut g = Gen::new(2);
    let mut cases = 0;
    let mut mismatches = Vec::new();
    // The fixed example first, then random five-branch states.
    let fixed = WaveFunction::from_amplitudes(
        "phi",
        [
            ("phi1", Amplitude::real(0.6)),
            ("phi2", Amplitude::new(0.3, 0.4)),
            ("phi3", Amplitude::real(0.2)),
            ("phi4", Amplitude::new(0.0, -0.55)),
            ("phi5", Amplitude::real(0.3)),
        ],
    )
    .normalize(&TOL)
    .unwrap();
    let mut states = vec![fixed];
    for _ in 0..500 {
        let mut wf = random_state(&mut g, "phi", 5);
        for (i, b) in wf.branches.iter_mut().enumerate() {
            b.label = format!("phi{}", i + 1);
        }
        if wf.branches[2].born_probability() > TOL.eps_zero {
            states.push(wf);
        }
    }
    for wf in &states {
        cases += 1;
        let record = collapse_forced(wf, "m", "phi3", &TOL).unwrap();
        let ctx = PossibilityContext::from_record(wf, &record, TOL).unwrap();
        // Oracle: every other non-zero branch, sorted by |c|² descending,
        // ties kept in declaration order and grouped.
        let mut expect: Vec<(f64, &str)> = wf
            .branches
            .iter()
            .filter(|b| b.label != "phi3" && b.born_probability() > TOL.eps_zero)
            .map(|b| (b.born_probability(), b.label.as_str()))
            .collect();
        expect.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut classes: Vec<Vec<&str>> = Vec::new();
        let mut last = f64::NAN;
        for (p, l) in &expect {
            if (last - p).abs() <= TOL.eps_grade {
                classes.last_mut().unwrap().push(l);
            } else {
                classes.push(vec![l]);
            }
            last = *p;
        }
        let ordering = ctx.grade_ordering();
        let got: Vec<Vec<&str>> = ordering
            .classes
            .iter()
            .map(|c| c.labels.iter().map(String::as_str).collect())
            .collect();
        let possible: BTreeSet<&str> = record.possible_labels.iter().map(String::as_str).collect();
        let expect_possible: BTreeSet<&str> = expect.iter().map(|e| e.1).collect();
        if got != classes || possible != expect_possible {
            mismatches.push(format!("{got:?} vs {classes:?}"));
        }
    }
    let fixed_possible = {
        let r = collapse_forced(&states[0], "m", "phi3", &TOL).unwrap();
        r.possible_labels.len()
    };
    outcome(
        mismatches.is_empty() && fixed_possible == 4,
        format!(
            "fixed example: {fixed_possible} possible labels; {cases} states, {} ordering mismatches vs sort oracle{}",
            mismatches.len(),
            mismatches.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    )
}

// 3 ------------------------------------------------------------------------

fn relation_axioms() -> Outcome {
    let mut g = Gen::new(3);
    let (mut irr, mut asym, mut trans, mut oracle_diff, mut triples) = (0, 0, 0, 0, 0u64);
    for _ in 0..1000 {
        let n = 1 + g.below(12);
        let wf = random_state(&mut g, "o", n);
        let realized = g.pick(&realizable(&wf)).to_string();
        let ctx = PossibilityContext::new(wf.clone(), &realized, TOL).unwrap();
        let report = check_relation_axioms(std::slice::from_ref(&ctx));
        irr += report.irreflexivity.violations;
        asym += report.asymmetry.violations;

        let possible: Vec<&str> = ctx.possible_labels().collect();
        let p = |l: &str| wf.probability_or_zero(l);
        let grade = |a: &str, b: &str| ctx.more_possible(a, b).unwrap();
        for &a in &possible {
            for &b in &possible {
                let oracle = if (p(a) - p(b)).abs() <= TOL.eps_grade {
                    Grade::SameGrade
                } else if p(a) > p(b) {
                    Grade::MorePossible
                } else {
                    Grade::LessPossible
                };
                if grade(a, b) != oracle {
                    oracle_diff += 1;
                }
                for &c in &possible {
                    triples += 1;
                    let (ab, bc, ac) = (grade(a, b), grade(b, c), grade(a, c));
                    let strict = ab == Grade::MorePossible && bc == Grade::MorePossible;
                    let weak = ab != Grade::LessPossible && bc != Grade::LessPossible;
                    if (strict && ac != Grade::MorePossible) || (weak && ac == Grade::LessPossible)
                    {
                        trans += 1;
                    }
                }
            }
        }
    }
    outcome(
        irr + asym + trans + oracle_diff == 0,
        format!(
            "1000 contexts (n <= 12): irreflexivity {irr}, asymmetry {asym} counterexamples; \
             grade transitivity {trans} failures over {triples} triples; {oracle_diff} grade mismatches vs oracle"
        ),
    )
}

// 4 ------------------------------------------------------------------------

fn grade_comparison() -> Outcome {
    let wf = WaveFunction::from_probabilities(
        "o",
        [("half", 0.5), ("third", 1.0 / 3.0), ("rest", 1.0 / 6.0)],
    );
    let ctx = PossibilityContext::new(wf, "rest", TOL).unwrap();
    let g = ctx.more_possible("half", "third").unwrap();
    let r = ctx.more_possible("third", "half").unwrap();
    outcome(
        g == Grade::MorePossible && r == Grade::LessPossible,
        format!("1/2 vs 1/3 -> {g:?}, reversed -> {r:?}"),
    )
}

// 5 ------------------------------------------------------------------------

fn ulps(a: f64, b: f64) -> u64 {
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
}

fn graph_composition() -> Outcome {
    let first = WaveFunction::from_probabilities("s", [("a", 0.5), ("b", 0.5)]);
    let second = WaveFunction::from_probabilities("t", [("x", 0.4), ("y", 0.6)]);
    let r1 = collapse_forced(&first, "m1", "a", &TOL).unwrap();
    let r2 = collapse_forced(&second, "m2", "x", &TOL).unwrap();
    let g = BranchGraph::new(TOL)
        .extend(&r1, &first, None)
        .unwrap()
        .extend(&r2, &second, Some(&VertexId::new("m1", "a")))
        .unwrap();
    let d = g
        .distance(&VertexId::new("m1", "*"), &VertexId::new("m2", "x"))
        .unwrap();
    let d_ulps = ulps(d, 0.2);

    let mut gen = Gen::new(5);
    let (mut pairs, mut wrong, mut forests) = (0u64, 0u64, 0);
    for _ in 0..300 {
        forests += 1;
        let g = random_forest(&mut gen, 50);
        let export = g.export();
        let ids: Vec<VertexId> = export
            .vertices
            .iter()
            .map(|v| VertexId::new(v.measurement_id.clone(), v.label.clone()))
            .collect();
        let index: HashMap<&str, usize> = export
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        // Oracle: transitive closure of the positive-weight edge relation.
        let n = ids.len();
        let mut reach = vec![vec![false; n]; n];
        for e in &export.edges {
            if e.weight > TOL.eps_zero {
                reach[index[e.from.as_str()]][index[e.to.as_str()]] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    let via = reach[k].clone();
                    for (r, v) in reach[i].iter_mut().zip(via) {
                        *r |= v;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                pairs += 1;
                if g.transitive_possibility(&ids[i], &ids[j]).unwrap() != reach[i][j] {
                    wrong += 1;
                }
            }
        }
    }
    outcome(
        d_ulps <= 4 && wrong == 0,
        format!(
            "two-step distance {d:?} ({d_ulps} ulp from 0.2, limit 4); {forests} random forests, \
             {pairs} pairs, {wrong} mismatches vs closure oracle"
        ),
    )
}

fn random_forest(g: &mut Gen, max_vertices: usize) -> BranchGraph {
    let mut graph = BranchGraph::new(TOL);
    for m in 0.. {
        let n = 1 + g.below(4);
        if graph.vertex_count() + n + 1 > max_vertices {
            break;
        }
        let wf = random_state(g, &format!("o{m}"), n);
        let id = format!("m{m}");
        let open: Vec<VertexId> = graph
            .leaves()
            .filter(|v| v.measurement_id != id && v.label != "*")
            .cloned()
            .collect();
        let attach = if open.is_empty() || g.chance(0.2) {
            None
        } else {
            Some(g.pick(&open).clone())
        };
        let realized = g.pick(&realizable(&wf)).to_string();
        let r = collapse_forced(&wf, &id, &realized, &TOL).unwrap();
        graph = graph.extend(&r, &wf, attach.as_ref()).unwrap();
    }
    graph
}

// 6 ------------------------------------------------------------------------

fn random_formula(g: &mut Gen, labels: &[String], depth: usize) -> ModalFormula {
    if depth == 0 || g.chance(0.25) {
        let l = g.pick(labels).clone();
        return match g.below(3) {
            0 => ModalFormula::atom(l),
            1 => ModalFormula::det(l),
            _ => ModalFormula::abs(l),
        };
    }
    let inner = random_formula(g, labels, depth - 1);
    match g.below(3) {
        0 => inner.not(),
        1 => inner.possibly(),
        _ => inner.necessarily(),
    }
}

/// Direct S5 semantics: `nec` quantifies over every member.
fn oracle_eval(members: &[WaveFunction], f: &ModalFormula, w: usize) -> bool {
    let p = |l: &str| members[w].probability_or_zero(l);
    match f {
        ModalFormula::Atom(l) => p(l) > TOL.eps_zero,
        ModalFormula::Det(l) => p(l) >= 1.0 - TOL.eps_zero,
        ModalFormula::Abs(l) => p(l) <= TOL.eps_zero,
        ModalFormula::Not(g) => !oracle_eval(members, g, w),
        ModalFormula::Possibly(g) => (0..members.len()).any(|v| oracle_eval(members, g, v)),
        ModalFormula::Necessarily(g) => (0..members.len()).all(|v| oracle_eval(members, g, v)),
    }
}

fn modal_duality() -> Outcome {
    let mut g = Gen::new(6);
    let (mut checks, mut dual_fail, mut oracle_fail) = (0u64, 0u64, 0u64);
    for fam_i in 0..200 {
        let k = 1 + g.below(4);
        let members: Vec<WaveFunction> = (0..k)
            .map(|i| {
                let n = 1 + g.below(4);
                let mut wf = random_state(&mut g, &format!("w{i}"), n);
                if g.chance(0.3) {
                    // Deterministic member.
                    let l = wf.branches[0].label.clone();
                    wf = WaveFunction::from_probabilities(format!("w{i}"), [(l, 1.0)]);
                }
                wf
            })
            .collect();
        let fam = ContextFamily::new(format!("f{fam_i}"), members.clone(), TOL).unwrap();
        let labels: Vec<String> = fam.vocabulary().into_iter().map(str::to_owned).collect();
        for _ in 0..10 {
            let f = random_formula(&mut g, &labels, 4);
            let boxed = f.clone().necessarily();
            let dual = f.clone().not().possibly().not();
            for w in 0..k {
                checks += 1;
                let b = modal::holds_at(&fam, &boxed, w).unwrap();
                if b != modal::holds_at(&fam, &dual, w).unwrap() {
                    dual_fail += 1;
                }
                if b != oracle_eval(&members, &boxed, w)
                    || modal::holds_at(&fam, &f, w).unwrap() != oracle_eval(&members, &f, w)
                {
                    oracle_fail += 1;
                }
            }
        }
    }
    outcome(
        dual_fail == 0 && oracle_fail == 0,
        format!(
            "200 families x 10 formulas (depth <= 5), {checks} world checks: \
             {dual_fail} duality failures, {oracle_fail} mismatches vs S5 oracle"
        ),
    )
}

// 7 ------------------------------------------------------------------------

fn deterministic_not_necessary() -> Outcome {
    let rain = WaveFunction::from_probabilities("rainforest", [("rain", 1.0)]);
    let desert = WaveFunction::from_probabilities("desert", [("dry", 1.0)]);
    let ctx = PossibilityContext::new(rain.clone(), "rain", TOL).unwrap();
    let fam = ContextFamily::new("climates", vec![rain, desert], TOL).unwrap();
    let det = ctx.classify_deterministic();
    let nec = modal::is_necessary(&fam, "rain");
    outcome(
        det && !nec,
        format!("classify_deterministic(member 1) = {det}, is_necessary = {nec}"),
    )
}

// 8 ------------------------------------------------------------------------

fn algebra_verifier() -> Outcome {
    let classical = algebra::verify(&ProbabilitySet::new(vec![0.0, 1.0], TOL).unwrap());
    let all_hold = Claim::ALL.iter().all(|&c| classical.verdict(c).holds());
    let ps = ProbabilitySet::new(vec![0.5, 0.3, 0.2], TOL).unwrap();
    let triple = algebra::verify(&ps);
    let v = triple.verdict(Claim::Orthocomplemented);
    let shown = v.to_string();
    let replays = v.counterexample().is_some_and(|c| c.replay(&ps));
    // Oracle: the complement of 0.3 is 0.7, which is not in the carrier.
    let expected = !ps.contains(1.0 - 0.3);
    outcome(
        all_hold && shown == "fails(0.3)" && replays && expected,
        format!(
            "{{0,1}}: {} of 8 claims hold; {{0.5,0.3,0.2}} orthocomplemented: {shown}, replay violates again: {replays}",
            Claim::ALL.iter().filter(|&&c| classical.verdict(c).holds()).count()
        ),
    )
}

// 9 ------------------------------------------------------------------------

const NAMES: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "phi", "psi", "x", "y_1", "φ", "ket",
];

fn random_scenario(g: &mut Gen) -> Scenario {
    let mut sc = Scenario::default();
    let n_states = 1 + g.below(4);
    for s in 0..n_states {
        let n = 1 + g.below(5);
        let branches = (0..n)
            .map(|i| {
                let re = (g.below(2001) as f64 - 1000.0) / 997.0;
                let im = if g.chance(0.4) {
                    (g.below(2001) as f64 - 1000.0) / 991.0
                } else {
                    0.0
                };
                let eig = if g.chance(0.3) {
                    g.unit() * 1e6 - 5e5
                } else {
                    i as f64
                };
                EigenBranch::new(format!("{}{i}", g.pick(NAMES)), Amplitude::new(re, im), eig)
            })
            .collect();
        let mut wf = WaveFunction::new(format!("s{s}"), branches);
        if wf.total_probability() <= TOL.eps_zero {
            wf.branches[0].amplitude = Amplitude::real(1.0);
        }
        sc.states.push(wf);
    }
    let n_steps = g.below(4);
    for m in 0..n_steps {
        let st = g.below(n_states);
        let labels: Vec<String> = sc.states[st].labels().map(str::to_owned).collect();
        let attach = if m > 0 && g.chance(0.5) {
            let prev = g.below(m);
            let pst = sc
                .states
                .iter()
                .position(|s| s.observable_name == sc.script[prev].state)
                .unwrap();
            let l = g.pick(&sc.states[pst].branches).label.clone();
            Some(VertexId::new(format!("m{prev}"), l))
        } else {
            None
        };
        let mode = if g.chance(0.5) {
            MeasureMode::Seed(g.0.next_u64() >> g.below(64))
        } else {
            MeasureMode::Force(g.pick(&labels).clone())
        };
        sc.script.push(MeasureStep {
            id: format!("m{m}"),
            state: sc.states[st].observable_name.clone(),
            attach,
            mode,
        });
    }
    let n_fams = g.below(3);
    for f in 0..n_fams {
        let k = 1 + g.below(n_states);
        let members = (0..k).map(|_| format!("s{}", g.below(n_states))).collect();
        sc.families.push(FamilyDecl {
            name: format!("f{f}"),
            members,
        });
    }
    for q in 0..g.below(5) {
        let family = match n_fams {
            0 => None,
            1 if g.chance(0.5) => None,
            _ => Some(format!("f{}", g.below(n_fams))),
        };
        let (_, members) = sc.query_family(family.as_deref()).unwrap();
        let labels: Vec<String> = members
            .iter()
            .flat_map(|m| {
                sc.state(m)
                    .unwrap()
                    .labels()
                    .map(str::to_owned)
                    .collect::<Vec<_>>()
            })
            .collect();
        let depth = g.below(6);
        sc.queries.push(Query::Formula {
            name: format!("q{q}"),
            family,
            formula: random_formula(g, &labels, depth),
        });
    }
    if g.chance(0.5) {
        sc.queries
            .push(Query::Verify(format!("s{}", g.below(n_states))));
    }
    if n_steps > 0 && g.chance(0.5) {
        sc.queries
            .push(Query::Grade(format!("m{}", g.below(n_steps))));
    }
    if g.chance(0.3) {
        sc.queries.push(Query::Axioms);
    }
    sc
}

/// Does `(line, column)` fall on `token` in `src`?
fn points_at(src: &str, line: usize, column: usize, token: &str) -> bool {
    let lines: Vec<&str> = src.split('\n').collect();
    let Some(text) = lines.get(line - 1) else {
        return false;
    };
    let rest: String = text.chars().skip(column - 1).collect();
    match token {
        "end of line" => rest.is_empty() && line < lines.len(),
        "end of input" => rest.is_empty() && line == lines.len(),
        t => rest.starts_with(t),
    }
}

fn mutate(g: &mut Gen, text: &str) -> String {
    let mut chars: Vec<char> = text.chars().collect();
    let edits = 1 + g.below(3);
    for _ in 0..edits {
        if chars.is_empty() {
            break;
        }
        let at = g.below(chars.len());
        match g.below(4) {
            0 => {
                chars.remove(at);
            }
            1 => chars.insert(
                at,
                *g.pick(&[
                    '?', '$', '{', '}', '(', ':', '@', '=', '[', '1', 'i', '.', '-',
                ]),
            ),
            2 => chars[at] = *g.pick(&['x', ';', ',', '(', ')', '\n', ' ', '9']),
            _ => {
                let b = g.below(chars.len());
                chars.swap(at, b);
            }
        }
    }
    chars.into_iter().collect()
}

fn dsl_round_trip() -> Outcome {
    let mut g = Gen::new(9);
    let (mut unequal, mut first_bad) = (0, None);
    for i in 0..1000 {
        let sc = random_scenario(&mut g);
        let text = dsl::print(&sc);
        let once = match dsl::parse(&text) {
            Ok(p) => p.scenario,
            Err(e) => {
                unequal += 1;
                first_bad.get_or_insert(format!("scenario {i}: {e}"));
                continue;
            }
        };
        let twice = dsl::parse(&dsl::print(&once)).map(|p| p.scenario);
        if twice.as_ref() != Ok(&once) {
            unequal += 1;
            first_bad.get_or_insert(format!("scenario {i} differs after reprint"));
        }
    }

    let (mut errors, mut misplaced, mut documents) = (0u64, 0u64, 0u64);
    let mut first_misplaced = None;
    for _ in 0..1000 {
        let base = dsl::print(&random_scenario(&mut g));
        let src = mutate(&mut g, &base);
        documents += 1;
        if let Err(diags) = dsl::parse(&src) {
            for e in &diags.0 {
                errors += 1;
                let (line, col) = e.position();
                if !points_at(&src, line, col, e.token()) {
                    misplaced += 1;
                    first_misplaced.get_or_insert_with(|| match e {
                        DslError::Parse(p) => format!("{p}"),
                        DslError::Resolve(r) => format!("{r}"),
                    });
                }
            }
        }
    }
    outcome(
        unequal == 0 && misplaced == 0 && errors > 0,
        format!(
            "1000 generated scenarios, {unequal} round-trip mismatches{}; {documents} mutated documents, \
             {errors} errors, {misplaced} positions outside the offending token{}",
            first_bad.map(|s| format!(" ({s})")).unwrap_or_default(),
            first_misplaced.map(|s| format!(" (first: {s})")).unwrap_or_default()
        ),
    )
}

// 10 -----------------------------------------------------------------------

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn determinism() -> Outcome {
    let mut files: Vec<PathBuf> = std::fs::read_dir(scenarios_dir())
        .unwrap()
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "qpd"))
        .collect();
    files.sort();
    let mut runs = 0;
    let mut differing = Vec::new();
    for f in &files {
        for args in [
            &["--json"][..],
            &["--table"],
            &["--json", "--seed-override", "42"],
        ] {
            let go = || {
                Command::new(env!("CARGO_BIN_EXE_branchlab"))
                    .arg("run")
                    .arg(f)
                    .args(args)
                    .output()
                    .unwrap()
            };
            let (a, b) = (go(), go());
            runs += 2;
            if a.stdout != b.stdout || !a.status.success() || a.stdout.is_empty() {
                differing.push(format!(
                    "{} {}",
                    f.file_name().unwrap().to_string_lossy(),
                    args.join(" ")
                ));
            }
        }
    }
    outcome(
        differing.is_empty() && !files.is_empty(),
        format!(
            "{} scenarios, {runs} runs, {} non-identical or failing{}",
            files.len(),
            differing.len(),
            differing
                .first()
                .map(|d| format!(" ({d})"))
                .unwrap_or_default()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("born-rule frequency", born_frequency),
        ("forced five-branch example", forced_example),
        ("relation axioms", relation_axioms),
        ("grade comparison 1/2 vs 1/3", grade_comparison),
        ("graph composition", graph_composition),
        ("modal duality", modal_duality),
        ("deterministic vs necessary", deterministic_not_necessary),
        ("algebra verifier", algebra_verifier),
        ("dsl round-trip and error positions", dsl_round_trip),
        ("cli determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
