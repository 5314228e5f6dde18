//! `eqforest`: decide, color and check equitable colorings of forests.

mod input;
mod report;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use eqforest::constructor::{color, Strategy};
use eqforest::harness::{self, Check, HarnessConfig};
use eqforest::{
    decide_k, decide_with, equitable_chromatic_number, lower_bound, major_vertex_check,
    select_bipartition, verify, DecideMode, EquitableColoring, Error, Witness,
};
use serde_json::json;

use input::{Input, TableSpec};
use report::RunReport;

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_PROOF_STEP: u8 = 3;

#[derive(Parser)]
#[command(name = "eqforest", version, about = "Equitable colorings of forests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Output {
    /// Emit a JSON run report instead of text.
    #[arg(long)]
    json: bool,
    /// Leave the timing field out of JSON reports.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether INPUT is equitably k-colorable.
    Decide {
        /// Edge-list file, `-` for stdin, or `family:NAME:PARAMS`.
        input: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Evaluate the criterion at every vertex and compare with the
        /// maximum-degree shortcut.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Build an equitable k-coloring of INPUT.
    Color {
        input: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Proof)]
        strategy: StrategyArg,
        /// Write the coloring (`vertex class` lines) here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        format: Output,
    },
    /// Check a coloring file against INPUT.
    Verify {
        input: String,
        #[arg(long)]
        coloring: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Equitable chromatic number of INPUT.
    Chromatic {
        input: String,
        #[command(flatten)]
        output: Output,
    },
    /// Run exhaustive property checks over all labeled trees up to max-n.
    CheckTheorems {
        #[arg(long)]
        max_n: usize,
        /// Comma-separated subset of main,lemma,bg,cl2,cl3,equiv,construct.
        #[arg(long, value_delimiter = ',', default_value = "main,lemma,bg,cl2,cl3,equiv")]
        which: Vec<Check>,
        #[arg(long, env = "EQFOREST_SHARDS", default_value_t = 1)]
        shards: usize,
        /// Run only this shard (0-based); all shards run when omitted.
        #[arg(long)]
        shard_index: Option<usize>,
        /// Report one counterexample per tree shape.
        #[arg(long)]
        distinct_shapes: bool,
        #[command(flatten)]
        output: Output,
    },
    /// CSV summary over a family range such as `star:3..8`.
    Table { spec: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Proof,
    ProofStrict,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Proof => Strategy::Proof,
            StrategyArg::ProofStrict => Strategy::ProofStrict,
        }
    }
}

struct Done {
    code: u8,
    report: RunReport,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let (json, no_timing) = match &cli.command {
        Command::Decide { output, .. }
        | Command::Verify { output, .. }
        | Command::Chromatic { output, .. }
        | Command::CheckTheorems { output, .. } => (output.json, output.no_timing),
        Command::Color { format, .. } => (format.json, format.no_timing),
        Command::Table { .. } => (false, true),
    };
    let result = match cli.command {
        Command::Decide { input, k, check, .. } => cmd_decide(&input, k as usize, check),
        Command::Color {
            input,
            k,
            strategy,
            output,
            format,
        } => cmd_color(&input, k as usize, strategy.into(), output, format.json),
        Command::Verify { input, coloring, .. } => cmd_verify(&input, &coloring),
        Command::Chromatic { input, .. } => cmd_chromatic(&input),
        Command::CheckTheorems {
            max_n,
            which,
            shards,
            shard_index,
            distinct_shapes,
            ..
        } => cmd_check(HarnessConfig {
            max_n,
            checks: which,
            shards,
            shard_index,
            distinct_shapes,
        }),
        Command::Table { spec } => cmd_table(&spec),
    };
    match result {
        Ok(mut done) => {
            if json {
                done.report.command.args = args;
                if !no_timing {
                    done.report.set_elapsed(start.elapsed());
                }
                emit(&format!("{}\n", done.report.to_json()));
            } else {
                for w in &done.report.warnings {
                    eprintln!("warning: {w}");
                }
                emit(&done.text);
            }
            ExitCode::from(done.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

/// Writes to stdout, tolerating a closed pipe (`eqforest ... | head`).
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn describe_witness(w: &Witness) -> String {
    match w {
        Witness::CriterionSatisfied { threshold, checked_vertices } => format!(
            "every checked vertex {checked_vertices:?} lies in a stable set of size {threshold}"
        ),
        Witness::Violation {
            vertex,
            alpha_x,
            threshold,
        } => format!("vertex {vertex} has alpha_x = {alpha_x} < floor(n/k) = {threshold}"),
        Witness::Orientation { target, .. } => format!("component sides sum to {target}"),
        Witness::NoOrientation { target, .. } => format!("no choice of component sides sums to {target}"),
        Witness::Edgeless => "no edges".to_string(),
        Witness::Edge { u, v } => format!("edge {u} {v}"),
        Witness::Empty => "empty forest".to_string(),
    }
}

fn cmd_decide(source: &str, k: usize, check: bool) -> eqforest::Result<Done> {
    let input = Input::load(source)?;
    let report = if check && k >= 3 {
        decide_with(&input.forest, k, DecideMode::Checked)?
    } else {
        decide_k(&input.forest, k)?
    };
    let verdict = if report.colorable { "yes" } else { "no" };
    let text = format!(
        "{verdict}: n = {}, k = {k}; {}\n",
        report.n,
        describe_witness(&report.witness)
    );
    let code = if report.colorable { EXIT_YES } else { EXIT_NO };
    let mut run = RunReport::new("decide", Some(&input));
    run.results = json!({ "verdict": verdict, "decision": report });
    Ok(Done { code, report: run, text })
}

fn cmd_color(
    source: &str,
    k: usize,
    strategy: Strategy,
    output: Option<PathBuf>,
    json_mode: bool,
) -> eqforest::Result<Done> {
    let input = Input::load(source)?;
    let mut run = RunReport::new("color", Some(&input));
    match color(&input.forest, k, strategy) {
        Ok(c) => {
            let file = c.coloring.to_coloring_file();
            let mut text = String::new();
            if let Some(path) = &output {
                std::fs::write(path, &file)
                    .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
                let _ = writeln!(
                    text,
                    "colored with {k} classes, sizes {:?}, case {}",
                    c.coloring.class_sizes(),
                    case_name(&c.trace)
                );
            } else if !json_mode {
                text = file;
                eprintln!(
                    "colored with {k} classes, sizes {:?}, case {}",
                    c.coloring.class_sizes(),
                    case_name(&c.trace)
                );
            }
            run.results = json!({
                "k": k,
                "colorable": true,
                "class_sizes": c.coloring.class_sizes(),
                "coloring": c.coloring.assignment(),
                "output": output.map(|p| p.display().to_string()),
                "trace": c.trace,
            });
            Ok(Done { code: EXIT_YES, report: run, text })
        }
        Err(Error::NotColorable { .. }) => {
            let report = decide_k(&input.forest, k)?;
            let text = format!(
                "not equitably {k}-colorable: {}\n",
                describe_witness(&report.witness)
            );
            run.results = json!({ "k": k, "colorable": false, "decision": report });
            Ok(Done { code: EXIT_NO, report: run, text })
        }
        Err(Error::ProofStep { step, detail, trace }) => {
            let trace_json = serde_json::to_string_pretty(&trace).expect("trace serializes");
            let text = format!("proof step `{step}` failed: {detail}\ntrace:\n{trace_json}\n");
            run.results = json!({
                "k": k,
                "colorable": true,
                "error": { "step": step, "detail": detail },
                "trace": trace,
            });
            Ok(Done {
                code: EXIT_PROOF_STEP,
                report: run,
                text,
            })
        }
        Err(e) => Err(e),
    }
}

fn case_name(trace: &eqforest::ConstructionTrace) -> String {
    trace
        .case
        .map(|c| serde_json::to_value(c).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default())
        .unwrap_or_else(|| "none".to_string())
}

fn cmd_verify(source: &str, coloring: &PathBuf) -> eqforest::Result<Done> {
    let input = Input::load(source)?;
    let text = std::fs::read_to_string(coloring)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", coloring.display())))?;
    let coloring = EquitableColoring::parse(&text, None)?;
    let v = verify(&input.forest, &coloring)?;
    let mut text = if v.valid {
        format!("valid: {} classes, sizes {:?}\n", coloring.k(), v.class_sizes)
    } else {
        format!("invalid: {} classes, sizes {:?}\n", coloring.k(), v.class_sizes)
    };
    for (u, w) in &v.monochromatic_edges {
        let _ = writeln!(text, "  edge {u} {w} inside class {}", coloring.class_of(*u));
    }
    for s in &v.size_violations {
        let _ = writeln!(
            text,
            "  class {} has {} vertices, class {} has {}",
            s.first_class, s.first_size, s.second_class, s.second_size
        );
    }
    let code = if v.valid { EXIT_YES } else { EXIT_NO };
    let mut run = RunReport::new("verify", Some(&input));
    run.results = json!({ "k": coloring.k(), "verification": v });
    Ok(Done { code, report: run, text })
}

fn cmd_chromatic(source: &str) -> eqforest::Result<Done> {
    let input = Input::load(source)?;
    let chi = equitable_chromatic_number(&input.forest);
    let lb = lower_bound(&input.forest);
    let major = major_vertex_check(&input.forest);
    let text = format!("{}\n", chi.value);
    let mut run = RunReport::new("chromatic", Some(&input));
    run.results = json!({
        "chromatic": chi,
        "lower_bound": lb,
        "major_vertex": major,
    });
    Ok(Done { code: EXIT_YES, report: run, text })
}

fn cmd_check(config: HarnessConfig) -> eqforest::Result<Done> {
    let outcomes = harness::run(&config)?;
    let mut run = RunReport::new("check-theorems", None);
    let mut text = String::new();
    let mut rows = Vec::new();
    for out in &outcomes {
        let status = if out.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            text,
            "{status} {}: {} instances, {} checks, {} counterexamples",
            out.check,
            out.instances,
            out.checks,
            out.counterexamples.len()
        );
        for c in &out.counterexamples {
            let k = c.k.map_or_else(|| "-".to_string(), |k| k.to_string());
            let _ = writeln!(text, "  k = {k}: {}\n{}", c.detail, indent(&c.edge_list));
        }
        rows.push(json!({
            "check": out.check,
            "instances": out.instances,
            "checks": out.checks,
            "counterexamples": out.counterexamples.len(),
            "passed": out.passed(),
        }));
        run.counterexamples.extend(out.counterexamples.iter().cloned());
    }
    let passed = run.counterexamples.is_empty();
    run.results = json!({
        "max_n": config.max_n,
        "shards": config.shards.max(1),
        "shard_index": config.shard_index,
        "checks": rows,
        "passed": passed,
    });
    let code = if passed { EXIT_YES } else { EXIT_NO };
    Ok(Done { code, report: run, text })
}

fn indent(edge_list: &str) -> String {
    edge_list.lines().map(|l| format!("    {l}")).collect::<Vec<_>>().join("\n")
}

fn cmd_table(spec: &str) -> eqforest::Result<Done> {
    let table = TableSpec::parse(spec)?;
    let mut text = String::from("instance,n,max_degree,a,b,lower_bound,chi_eq,case\n");
    let mut run = RunReport::new("table", None);
    for family in table.members()? {
        run.warnings.extend(family.warnings());
        let forest = eqforest::gen_family(&family)?;
        let bip = select_bipartition(&forest);
        let chi = equitable_chromatic_number(&forest);
        let case = if forest.n() == 0 {
            "none".to_string()
        } else {
            case_name(&color(&forest, chi.value, Strategy::Proof)?.trace)
        };
        let name = family.to_string();
        let name = if name.contains(',') { format!("\"{name}\"") } else { name };
        let _ = writeln!(
            text,
            "{name},{},{},{},{},{},{},{case}",
            forest.n(),
            forest.max_degree(),
            bip.a(),
            bip.b(),
            chi.lower_bound,
            chi.value
        );
    }
    Ok(Done { code: EXIT_YES, report: run, text })
}
