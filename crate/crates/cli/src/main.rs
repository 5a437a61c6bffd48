//! `branchlab`: run `.qpd` scenarios.
//!
//! Exit status: 0 success, 1 input error (unreadable file, parse or resolve
//! error, bad flags or config), 2 runtime error.

mod config;
mod table;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use branchlab::algebra::{self, ProbabilitySet};
use branchlab::dsl::{self, Parsed};
use branchlab::run::{run, Execution, GradingReport, RunOptions, StateAlgebra};
use branchlab::{BranchGraph, Tolerances};
use clap::{Parser, Subcommand, ValueEnum};

use config::TolFlags;

#[derive(Parser)]
#[command(
    name = "branchlab",
    version,
    about = "Run measurement-collapse scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    tol: TolFlags,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum GraphFormat {
    #[default]
    Json,
    Dot,
}

#[derive(clap::Args, Clone, Copy)]
#[group(multiple = false)]
struct OutputFlags {
    /// Print JSON
    #[arg(long)]
    json: bool,
    /// Print aligned text (default)
    #[arg(long)]
    table: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Execute scenarios and print their reports, in argument order
    Run {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        out: OutputFlags,
        /// Use this seed for every `seed` step
        #[arg(long, value_name = "N")]
        seed_override: Option<u64>,
        /// Write the branch graph here (single scenario only)
        #[arg(long, value_name = "PATH")]
        export_graph: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        graph_format: GraphFormat,
    },
    /// Check the order and algebra claims on one state's probabilities
    Verify {
        path: PathBuf,
        state: String,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Print the grade ordering of one measurement
    Grade {
        path: PathBuf,
        measurement: String,
        #[command(flatten)]
        out: OutputFlags,
        #[arg(long, value_name = "N")]
        seed_override: Option<u64>,
    },
    /// Print the branch graph of a scenario's script
    Graph {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: GraphFormat,
        #[arg(long, value_name = "N")]
        seed_override: Option<u64>,
    },
    /// Print the canonical form of a scenario
    Fmt { path: PathBuf },
}

/// Buffered result of one command.
#[derive(Default)]
struct Outcome {
    stdout: String,
    stderr: String,
    code: u8,
}

impl Outcome {
    fn fail(mut self, code: u8, msg: impl std::fmt::Display) -> Self {
        let _ = writeln!(self.stderr, "error: {msg}");
        self.code = code;
        self
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcomes = dispatch(&cli);
    let (mut so, mut se) = (std::io::stdout().lock(), std::io::stderr().lock());
    let mut code = 0;
    for o in outcomes {
        let _ = se.write_all(o.stderr.as_bytes());
        let _ = so.write_all(o.stdout.as_bytes());
        code = code.max(o.code);
    }
    ExitCode::from(code)
}

fn dispatch(cli: &Cli) -> Vec<Outcome> {
    match &cli.command {
        Command::Run {
            paths,
            out,
            seed_override,
            export_graph,
            graph_format,
        } => {
            if export_graph.is_some() && paths.len() > 1 {
                return vec![Outcome::default().fail(1, "--export-graph needs a single scenario")];
            }
            let export = export_graph.as_deref().map(|p| (p, *graph_format));
            thread::scope(|s| {
                let handles: Vec<_> = paths
                    .iter()
                    .map(|p| s.spawn(move || cmd_run(p, &cli.tol, *out, *seed_override, export)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| {
                        h.join()
                            .unwrap_or_else(|_| Outcome::default().fail(2, "worker panicked"))
                    })
                    .collect()
            })
        }
        Command::Verify { path, state, out } => vec![cmd_verify(path, &cli.tol, state, *out)],
        Command::Grade {
            path,
            measurement,
            out,
            seed_override,
        } => vec![cmd_grade(path, &cli.tol, measurement, *out, *seed_override)],
        Command::Graph {
            path,
            format,
            seed_override,
        } => vec![cmd_graph(path, &cli.tol, *format, *seed_override)],
        Command::Fmt { path } => vec![cmd_fmt(path, &cli.tol)],
    }
}

/// Reads, parses and resolves `path`, echoing warnings to stderr.
fn load(path: &Path, flags: &TolFlags, o: &mut Outcome) -> Option<(Parsed, Tolerances)> {
    let tol = match flags.resolve(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(o.stderr, "error: {e:#}");
            o.code = 1;
            return None;
        }
    };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(o.stderr, "error: cannot read {}: {e}", path.display());
            o.code = 1;
            return None;
        }
    };
    match dsl::parse_with(&text, &tol) {
        Ok(p) => {
            for w in &p.warnings {
                let _ = writeln!(o.stderr, "{}:{w}", path.display());
            }
            Some((p, tol))
        }
        Err(diags) => {
            for d in &diags.0 {
                let _ = writeln!(o.stderr, "{}:{d}", path.display());
            }
            o.code = 1;
            None
        }
    }
}

fn scenario_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn execute(path: &Path, flags: &TolFlags, seed: Option<u64>, o: &mut Outcome) -> Option<Execution> {
    let (parsed, tol) = load(path, flags, o)?;
    let opts = RunOptions {
        seed_override: seed,
        tol,
    };
    match run(
        &parsed.scenario,
        &scenario_name(path),
        &parsed.warnings,
        &opts,
    ) {
        Ok(e) => Some(e),
        Err(e) => {
            let _ = writeln!(o.stderr, "{}: runtime error: {e}", path.display());
            o.code = 2;
            None
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn render_graph(g: &BranchGraph, f: GraphFormat) -> String {
    match f {
        GraphFormat::Json => json(&g.export()),
        GraphFormat::Dot => g.to_dot(),
    }
}

fn cmd_run(
    path: &Path,
    flags: &TolFlags,
    out: OutputFlags,
    seed: Option<u64>,
    export: Option<(&Path, GraphFormat)>,
) -> Outcome {
    let mut o = Outcome::default();
    let Some(exec) = execute(path, flags, seed, &mut o) else {
        return o;
    };
    if let Some((dest, f)) = export {
        if let Err(e) = fs::write(dest, render_graph(&exec.graph, f)) {
            return o.fail(2, format_args!("cannot write {}: {e}", dest.display()));
        }
    }
    o.stdout = if out.json {
        json(&exec.report)
    } else {
        table::report(&exec.report)
    };
    o
}

fn cmd_verify(path: &Path, flags: &TolFlags, state: &str, out: OutputFlags) -> Outcome {
    let mut o = Outcome::default();
    let Some((parsed, tol)) = load(path, flags, &mut o) else {
        return o;
    };
    let Some(wf) = parsed.scenario.state(state) else {
        return o.fail(1, format_args!("unknown state `{state}`"));
    };
    let report = match ProbabilitySet::from_wavefunction(wf, tol) {
        Ok(ps) => algebra::verify(&ps),
        Err(e) => return o.fail(2, e),
    };
    let sa = StateAlgebra {
        state: state.to_owned(),
        report,
    };
    if out.json {
        o.stdout = json(&sa);
    } else {
        table::algebra(&mut o.stdout, &sa);
    }
    o
}

fn cmd_grade(
    path: &Path,
    flags: &TolFlags,
    id: &str,
    out: OutputFlags,
    seed: Option<u64>,
) -> Outcome {
    let mut o = Outcome::default();
    let Some(exec) = execute(path, flags, seed, &mut o) else {
        return o;
    };
    let Some(i) = exec
        .report
        .steps
        .iter()
        .position(|s| s.record.measurement_id == id)
    else {
        return o.fail(1, format_args!("unknown measurement `{id}`"));
    };
    let ordering = exec.contexts[i].grade_ordering();
    let g = GradingReport {
        measurement_id: id.to_owned(),
        bounds: ordering.bounds().ok(),
        ordering,
    };
    if out.json {
        o.stdout = json(&g);
    } else {
        table::grading(&mut o.stdout, &g);
    }
    o
}

fn cmd_graph(path: &Path, flags: &TolFlags, f: GraphFormat, seed: Option<u64>) -> Outcome {
    let mut o = Outcome::default();
    if let Some(exec) = execute(path, flags, seed, &mut o) {
        o.stdout = render_graph(&exec.graph, f);
    }
    o
}

fn cmd_fmt(path: &Path, flags: &TolFlags) -> Outcome {
    let mut o = Outcome::default();
    if let Some((parsed, _)) = load(path, flags, &mut o) {
        o.stdout = dsl::print(&parsed.scenario);
    }
    o
}
