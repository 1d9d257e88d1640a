mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qsverify::casecheck::{self, blichfeldt_consistency, AllCases, CaseReport, CheckReport};
use qsverify::chartab::lift_candidates;
use qsverify::data::DataSet;
use qsverify::hurwitz::{self, Feasibility, HurwitzInstance};
use qsverify::repring::{faithful_of_degree, invariant_table, regen_tables, InvariantRow, RegenReport, TABLE_DEGREE};
use qsverify::{DatasetReport, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "qsverify", version, about = "Character-table checks for quasi-simple group actions")]
struct Cli {
    /// Curated data directory (must contain a MANIFEST).
    #[arg(long, global = true, default_value = "data")]
    data: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Treat manifest mismatches as failures in every command.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check every table, fusion, catalog and permutation realisation.
    Validate,
    /// Recompute invariant-dimension rows and compare them with the expected tables.
    Tables(TablesArgs),
    /// Signature feasibility for a group acting on a curve with rational quotient.
    Hurwitz(HurwitzArgs),
    /// Run case reports.
    Case(CaseArgs),
    /// Irreducibles of a given degree across a group and its covers that are faithful on the center.
    Lift(LiftArgs),
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    dim: Option<u64>,
    #[arg(long, default_value_t = TABLE_DEGREE, value_parser = clap::value_parser!(u64).range(1..=TABLE_DEGREE))]
    max_degree: u64,
}

#[derive(Args)]
struct HurwitzArgs {
    #[arg(long, requires_all = ["genus", "orders"], conflicts_with = "batch")]
    order: Option<u64>,
    /// A genus or an inclusive range `LO..HI`.
    #[arg(long)]
    genus: Option<String>,
    /// Comma-separated cyclic orders.
    #[arg(long)]
    orders: Option<String>,
    /// Apply 84(g-1) >= N with this N before the signature search.
    #[arg(long)]
    bound_order: Option<u64>,
    /// File of `order genus r1,r2,...` lines.
    #[arg(long)]
    batch: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CaseArgs {
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    dim: u64,
}

/// Exit statuses: checks failed, or the input could not be used.
const FAIL: u8 = 1;
const USAGE: u8 = 2;

struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(USAGE, e.to_string())
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: &'static str,
    command: &'a str,
    passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
    result: T,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(FAIL),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn load(cli: &Cli) -> Result<(DataSet, Vec<String>, bool), Failure> {
    let ds = DataSet::load(&cli.data)?;
    let warnings: Vec<String> = ds
        .manifest
        .failures()
        .map(|c| format!("manifest: {} ({})", c.name, c.detail))
        .collect();
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let ok = !(cli.strict && !warnings.is_empty());
    Ok((ds, warnings, ok))
}

fn emit<T: Serialize>(
    cli: &Cli,
    command: &str,
    passed: bool,
    warnings: Vec<String>,
    result: &T,
    markdown: impl FnOnce() -> String,
) -> Result<bool, Failure> {
    let text = match cli.format {
        Format::Json => {
            let env = Envelope { schema_version: SCHEMA_VERSION, command, passed, warnings, result };
            serde_json::to_string_pretty(&env)? + "\n"
        }
        Format::Markdown => markdown(),
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    Ok(passed)
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Validate => cmd_validate(cli),
        Command::Tables(a) => cmd_tables(cli, a),
        Command::Hurwitz(a) => cmd_hurwitz(cli, a),
        Command::Case(a) => cmd_case(cli, a),
        Command::Lift(a) => cmd_lift(cli, a),
    }
}

#[derive(Serialize)]
struct ValidateResult {
    dataset: DatasetReport,
    catalog_consistency: CheckReport,
}

fn cmd_validate(cli: &Cli) -> Result<bool, Failure> {
    let ds = DataSet::load(&cli.data)?;
    let res = ValidateResult {
        dataset: qsverify::validation::validate_dataset(&ds),
        catalog_consistency: blichfeldt_consistency(&ds),
    };
    let passed = res.dataset.passed() && res.catalog_consistency.passed();
    for (subject, check) in res.dataset.failures() {
        eprintln!("FAIL {subject}: {check}");
    }
    emit(cli, "validate", passed, Vec::new(), &res, || render::validate(&res.dataset, &res.catalog_consistency))
}

#[derive(Serialize)]
struct TablesResult {
    max_degree: u64,
    comparison: RegenReport,
    /// Rows computed for a requested (group, dimension) with no expected entry.
    unlisted: Vec<InvariantRow>,
}

fn cmd_tables(cli: &Cli, a: &TablesArgs) -> Result<bool, Failure> {
    let (ds, warnings, ok) = load(cli)?;
    if let Some(g) = &a.group {
        if ds.table(g).is_none() {
            return Err(Failure(USAGE, format!("unknown group `{g}`")));
        }
    }
    let wanted: Vec<_> = ds
        .expected_rows
        .iter()
        .filter(|r| a.group.as_ref().is_none_or(|g| &r.group == g) && a.dim.is_none_or(|d| r.dimension == d))
        .cloned()
        .collect();
    let comparison = regen_tables(&ds.tables, &wanted, a.max_degree)?;
    let mut unlisted = Vec::new();
    if wanted.is_empty() {
        if let Some(tbl) = a.group.as_deref().and_then(|g| ds.table(g)) {
            let mut dims: Vec<u64> = tbl.irreducibles.iter().map(|c| c.degree()).collect();
            dims.sort_unstable();
            dims.dedup();
            for d in dims.into_iter().filter(|d| a.dim.is_none_or(|x| x == *d)) {
                for label in faithful_of_degree(tbl, d) {
                    unlisted.push(invariant_table(tbl, &label, a.max_degree)?);
                }
            }
        }
    }
    let res = TablesResult { max_degree: a.max_degree, comparison, unlisted };
    let passed = ok && res.comparison.passed();
    emit(cli, "tables", passed, warnings, &res, || render::tables(&res.comparison, &res.unlisted))
}

#[derive(Serialize)]
struct HurwitzRecord {
    group_order: u64,
    genus: u64,
    orders: Vec<u64>,
    lhs: String,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<std::collections::BTreeMap<u64, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    search_nodes: Option<u64>,
    /// Agreement with brute-force box enumeration (run when there are at most six orders).
    #[serde(skip_serializing_if = "Option::is_none")]
    box_agrees: Option<bool>,
}

fn solve(inst: &HurwitzInstance, bound_order: Option<u64>) -> Result<HurwitzRecord, Failure> {
    let mut rec = HurwitzRecord {
        group_order: inst.group_order,
        genus: inst.genus,
        orders: inst.cyclic_orders.clone(),
        lhs: inst.lhs().to_string(),
        verdict: "",
        witness: None,
        search_nodes: None,
        box_agrees: None,
    };
    if bound_order.is_some_and(|n| !hurwitz::hurwitz_bound(n, inst.genus)) {
        rec.verdict = "ELIMINATED_BOUND";
        return Ok(rec);
    }
    let f = inst.feasible()?;
    let box_first = (inst.cyclic_orders.len() <= 6).then(|| inst.box_solutions().into_iter().next());
    match f {
        Feasibility::Feasible { witness } => {
            rec.box_agrees = box_first.map(|b| b.as_ref() == Some(&witness));
            rec.verdict = "FEASIBLE";
            rec.witness = Some(witness.coefficients);
        }
        Feasibility::Infeasible { nodes } => {
            rec.box_agrees = box_first.map(|b| b.is_none());
            rec.verdict = "INFEASIBLE";
            rec.search_nodes = Some(nodes);
        }
    }
    Ok(rec)
}

fn genus_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure(USAGE, format!("bad genus `{s}`; expected G or LO..HI"));
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
            if lo > hi {
                return Err(bad());
            }
            Ok((lo, hi))
        }
        None => {
            let g = s.trim().parse().map_err(|_| bad())?;
            Ok((g, g))
        }
    }
}

fn cmd_hurwitz(cli: &Cli, a: &HurwitzArgs) -> Result<bool, Failure> {
    let instances: Vec<HurwitzInstance> = match (&a.batch, a.order) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure(USAGE, format!("{}: {e}", path.display())))?;
            hurwitz::parse_batch(&text).map_err(|e| Failure(USAGE, format!("{}: {e}", path.display())))?
        }
        (None, Some(order)) => {
            let (lo, hi) = genus_range(a.genus.as_deref().unwrap_or_default())?;
            let orders = hurwitz::parse_orders(a.orders.as_deref().unwrap_or_default())?;
            (lo..=hi).map(|g| HurwitzInstance::new(order, &orders, g)).collect::<Result<_, _>>()?
        }
        (None, None) => return Err(Failure(USAGE, "give --order/--genus/--orders or --batch".into())),
    };
    let records = instances.iter().map(|i| solve(i, a.bound_order)).collect::<Result<Vec<_>, _>>()?;
    let passed = records.iter().all(|r| r.box_agrees != Some(false));
    emit(cli, "hurwitz", passed, Vec::new(), &records, || render::hurwitz(&records))
}

/// Per-report comparison against the expectations file.
#[derive(Serialize)]
struct Expectation {
    id: String,
    verdict: String,
    expected_verdict: Option<String>,
    assumed: usize,
    expected_assumed: Option<usize>,
    side_checks_passed: bool,
    matches: bool,
}

#[derive(Serialize)]
struct CaseResult {
    expectations: Vec<Expectation>,
    #[serde(flatten)]
    reports: AllCases,
}

fn expectation(ds: &DataSet, id: &str, verdict: &str, assumed: usize, side_ok: bool) -> Expectation {
    let exp = ds.case_expectations.get(id);
    Expectation {
        id: id.to_string(),
        verdict: verdict.to_string(),
        expected_verdict: exp.map(|e| e.verdict.clone()),
        assumed,
        expected_assumed: exp.map(|e| e.assumed),
        side_checks_passed: side_ok,
        matches: side_ok && exp.is_some_and(|e| e.verdict == verdict && e.assumed == assumed),
    }
}

fn cmd_case(cli: &Cli, a: &CaseArgs) -> Result<bool, Failure> {
    let (ds, warnings, ok) = load(cli)?;
    let reports = if a.all {
        casecheck::run_all(&ds)?
    } else {
        let id = a.id.as_deref().unwrap_or_default();
        let global = |id: &str| -> Result<Option<CheckReport>, Failure> {
            Ok(match id {
                "quotient-invariants" => Some(casecheck::quotient_invariant_check(&ds)?),
                "a7-exclusion" => Some(casecheck::a7_exclusion_checks(&ds)?),
                _ => None,
            })
        };
        match (ds.case(id), global(id)?) {
            (Some(c), _) => AllCases { cases: vec![casecheck::run_case(&ds, c)?], checks: Vec::new() },
            (None, Some(r)) => AllCases { cases: Vec::new(), checks: vec![r] },
            (None, None) => return Err(Failure(USAGE, format!("unknown case id `{id}`"))),
        }
    };
    let expectations: Vec<Expectation> = reports
        .cases
        .iter()
        .map(|c: &CaseReport| expectation(&ds, &c.id, c.final_verdict.as_str(), c.assumed_count, c.side_checks_passed()))
        .chain(
            reports
                .checks
                .iter()
                .map(|c| expectation(&ds, &c.id, c.final_verdict.as_str(), c.assumed_count, true)),
        )
        .collect();
    let passed = ok && expectations.iter().all(|e| e.matches);
    let res = CaseResult { expectations, reports };
    emit(cli, "case", passed, warnings, &res, || render::cases(&res.reports))
}

#[derive(Serialize)]
struct LiftResult {
    family: Vec<String>,
    dim: u64,
    candidates: Vec<LiftCandidate>,
}

#[derive(Serialize)]
struct LiftCandidate {
    cover: String,
    character: String,
}

fn cmd_lift(cli: &Cli, a: &LiftArgs) -> Result<bool, Failure> {
    let (ds, warnings, ok) = load(cli)?;
    let family = ds.cover_family(&a.family);
    if family.is_empty() {
        return Err(Failure(USAGE, format!("unknown family `{}`", a.family)));
    }
    let candidates = lift_candidates(&family, a.dim)
        .into_iter()
        .map(|(cover, character)| LiftCandidate { cover, character })
        .collect();
    let res = LiftResult { family: family.iter().map(|t| t.group.clone()).collect(), dim: a.dim, candidates };
    emit(cli, "lift", ok, warnings, &res, || render::lift(&res.family, res.dim, &res.candidates.iter().map(|c| (c.cover.as_str(), c.character.as_str())).collect::<Vec<_>>()))
}
