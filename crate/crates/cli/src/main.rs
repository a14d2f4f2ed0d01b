//! `propclust` — solve, audit and reproduce proportional clustering instances.
//!
//! Exit codes: 0 success / pass, 1 violation (or a repro mismatch), 2 invalid
//! input, 3 inconclusive or cap-limited result under `--require-exact`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use propclust::audit::{audit, AuditParams, AuditResult, Notion, Status};
use propclust::fixtures::{fixture, repro, repro_all, FixtureId, ReproRow};
use propclust::generate::{generate, CandidateMode, Family, GenSpec};
use propclust::instance::parse_rational;
use propclust::io::{InstanceFile, OutcomeFile};
use propclust::{Instance, Outcome, PointId, Rational, Rule};

#[derive(Parser)]
#[command(name = "propclust", version, about = "Proportional clustering rules and fairness auditors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a clustering rule and print the outcome.
    Solve(SolveArgs),
    /// Audit an outcome for one fairness notion and print the report.
    Audit(AuditArgs),
    /// Re-run the embedded fixtures and compare with their expected results.
    Repro(ReproArgs),
    /// Generate a random instance.
    Gen(GenArgs),
    /// Print the instance of an embedded fixture.
    Fixture(FixtureArgs),
}

#[derive(Args)]
struct Source {
    /// Instance JSON file.
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    input: Option<PathBuf>,
    /// Embedded fixture, e.g. `fig3a(k=4)` or `fig4a(2)`.
    #[arg(long)]
    fixture: Option<FixtureId>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_parser = parse_rule)]
    alg: Rule,
    /// Centers per captured ball for fair greedy capture.
    #[arg(long, default_value_t = 1)]
    q: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    source: Source,
    /// Include the radius-sweep trace.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, value_parser = parse_notion)]
    notion: Notion,
    #[arg(long, value_parser = parse_gamma)]
    gamma: Option<Rational>,
    #[arg(long)]
    q: Option<usize>,
    /// Largest deviation set enumerated by the q-notions.
    #[arg(long)]
    cap: Option<usize>,
    /// Largest ℓ examined by the rank axioms.
    #[arg(long)]
    max_ell: Option<usize>,
    /// Search-node budget of the rank axioms.
    #[arg(long)]
    node_budget: Option<u64>,
    #[command(flatten)]
    source: Source,
    /// Outcome JSON file (`{"W": [...]}`).
    #[arg(long, conflicts_with = "w", required_unless_present = "w")]
    outcome: Option<PathBuf>,
    /// Outcome as comma-separated point labels or ids, e.g. `1,2,3,6,9`.
    #[arg(long)]
    w: Option<String>,
    /// Exit with 3 when an enumeration cap limited the result.
    #[arg(long)]
    require_exact: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ReproArgs {
    /// A fixture id or `all`.
    #[arg(long, default_value = "all")]
    case: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = parse_mode, default_value = "agents")]
    mode: CandidateMode,
    /// Candidate-only points for `superset` and `mixed` modes.
    #[arg(long, default_value_t = 0)]
    extra: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FixtureArgs {
    id: FixtureId,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    s.parse().map_err(|e: propclust::Error| e.to_string())
}

fn parse_notion(s: &str) -> Result<Notion, String> {
    s.parse().map_err(|e: propclust::Error| e.to_string())
}

fn parse_gamma(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: propclust::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<CandidateMode, String> {
    match s {
        "agents" => Ok(CandidateMode::Agents),
        "superset" => Ok(CandidateMode::Superset),
        "mixed" => Ok(CandidateMode::Mixed),
        _ => Err(format!("unknown candidate mode {s:?} (agents, superset, mixed)")),
    }
}

/// Failures that map to exit code 2.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Audit(args) => run_audit(args),
        Command::Repro(args) => run_repro(args),
        Command::Gen(args) => gen(args),
        Command::Fixture(args) => export_fixture(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(InputError(e)) => {
            let kind = e.downcast_ref::<propclust::Error>().map_or("input", propclust::Error::kind);
            let msg = serde_json::json!({ "error": kind, "message": format!("{e:#}") });
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

fn load(source: &Source) -> Result<InstanceFile, InputError> {
    match (&source.input, &source.fixture) {
        (Some(path), _) => {
            let text = read(path)?;
            Ok(InstanceFile::parse(&text).with_context(|| format!("parsing {}", path.display()))?)
        }
        (None, Some(id)) => Ok(fixture(id)?.file),
        (None, None) => Err(anyhow!("either --input or --fixture is required").into()),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), InputError> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?,
        None => {
            // a closed pipe (e.g. `| head`) is not an error
            if let Err(e) = writeln!(std::io::stdout().lock(), "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

fn solve(args: SolveArgs) -> Result<u8, InputError> {
    let inst = load(&args.source)?.to_instance()?;
    let (outcome, trace) = args.alg.run(&inst, args.q, args.seed)?;
    let file = OutcomeFile::new(&outcome, args.trace.then_some(trace));
    emit(&file.to_json(), args.output.as_deref())?;
    Ok(0)
}

/// Resolves `--w` tokens: labels first, then plain point ids.
fn outcome_from_list(file: &InstanceFile, list: &str) -> anyhow::Result<Outcome> {
    let mut points: Vec<PointId> = Vec::new();
    for token in list.trim_matches(|c| c == '{' || c == '}').split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let by_label = file.labels.as_ref().and_then(|l| l.iter().position(|x| x == token));
        match by_label {
            Some(p) => points.push(p),
            None => points.push(token.parse().map_err(|_| anyhow!("unknown point {token:?} in --w"))?),
        }
    }
    Ok(Outcome::external(points))
}

fn run_audit(args: AuditArgs) -> Result<u8, InputError> {
    let file = load(&args.source)?;
    let inst: Instance = file.to_instance()?;
    let outcome = match (&args.outcome, &args.w) {
        (Some(path), _) => OutcomeFile::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))?.outcome(),
        (None, Some(list)) => outcome_from_list(&file, list)?,
        (None, None) => return Err(anyhow!("either --outcome or --w is required").into()),
    };
    let params = AuditParams {
        gamma: args.gamma,
        q: args.q,
        size_cap: args.cap,
        max_ell: args.max_ell,
        node_budget: args.node_budget,
    };
    let report = audit(&inst, &outcome, args.notion, &params)?;
    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    emit(&json, args.output.as_deref())?;
    Ok(match report.result {
        AuditResult::Inconclusive => 3,
        _ if args.require_exact && report.status == Status::CapExhausted => 3,
        AuditResult::Violation => 1,
        _ => 0,
    })
}

fn run_repro(args: ReproArgs) -> Result<u8, InputError> {
    let rows = if args.case == "all" { repro_all()? } else { repro(&args.case.parse()?)? };
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize"),
        Format::Csv => csv_table(&rows)?,
    };
    emit(text.trim_end(), args.output.as_deref())?;
    Ok(if rows.iter().all(|r| r.matched) { 0 } else { 1 })
}

fn csv_table(rows: &[ReproRow]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["fixture", "notion", "params", "expected", "computed", "status", "match"])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("{e}"))?;
    String::from_utf8(bytes).map_err(|e| anyhow!("{e}"))
}

fn gen(args: GenArgs) -> Result<u8, InputError> {
    if args.n == 0 || args.k == 0 {
        return Err(anyhow!("--n and --k must be positive").into());
    }
    let spec = GenSpec { family: args.family, n: args.n, k: args.k, mode: args.mode, extra: args.extra, seed: args.seed };
    emit(&generate(&spec)?.to_json(), args.output.as_deref())?;
    Ok(0)
}

fn export_fixture(args: FixtureArgs) -> Result<u8, InputError> {
    emit(&fixture(&args.id)?.file.to_json(), args.output.as_deref())?;
    Ok(0)
}
