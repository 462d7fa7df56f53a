use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use weightcomb::blocks::{build_graph, orlik_block};
use weightcomb::census::{self, csv_header, CensusRow, EngineConfig, SearchSpec};
use weightcomb::orders::{map_compatible, weight_orders};
use weightcomb::report::{analyze, check_limits, phi_product};
use weightcomb::verify::{run_suite, Suite};
use weightcomb::weights::WeightSystem;
use weightcomb::Error;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "weightcomb", version, about = "Combinatorics of weight systems of quasihomogeneous singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report on one weight system
    Analyze(SystemArgs),
    /// Census of (C2-bar) systems with n weights and d <= max-d
    Enumerate(EnumerateArgs),
    /// The n = 4, d <= 200 systems that satisfy (C2-bar) but not (C2)
    Table1(TableArgs),
    /// The n = 5, d <= 200 systems with psi_w(d_w) = 0
    Table2(TableArgs),
    /// Census rows that violate the strong (or weak) Saito inequality
    Saito(SaitoArgs),
    /// Run the randomized and exhaustive invariant suites
    Verify(VerifyArgs),
    /// Excellent orders of a (C2) system and compatibility of psi_w
    Orders(SystemArgs),
    /// Block conditions for a set M, or for each member of a system's covering
    Blocks(BlocksArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SystemArgs {
    /// comma-separated weights, or fractions s/t with --normalized
    weights: String,
    #[arg(long)]
    degree: Option<u64>,
    /// read the weights as normalized fractions s/t
    #[arg(long)]
    normalized: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct EngineArgs {
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// disable search-space pruning (debug)
    #[arg(long)]
    no_prune: bool,
    /// directory of per-degree shards
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// reuse shards from --checkpoint after re-checking them
    #[arg(long)]
    resume: bool,
    /// fraction of degrees re-scanned without pruning
    #[arg(long)]
    audit: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long = "n")]
    n: usize,
    #[arg(long)]
    max_d: u64,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SaitoArgs {
    #[arg(long = "n")]
    n: usize,
    #[arg(long)]
    max_d: u64,
    /// report violations of the weak inequality instead
    #[arg(long)]
    weak: bool,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BlocksArgs {
    /// comma-separated set M, or weights when --degree is given
    set: String,
    #[arg(long)]
    degree: Option<u64>,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
    Verification(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource(_) => EXIT_RESOURCE,
                Error::InvalidInput(_) | Error::NotPrime(_) | Error::Precondition(_) => EXIT_USAGE,
                _ => EXIT_VERIFY,
            })
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Analyze(a) => run_analyze(a),
        Command::Enumerate(a) => run_enumerate(a),
        Command::Table1(a) => run_table(a, true),
        Command::Table2(a) => run_table(a, false),
        Command::Saito(a) => run_saito(a),
        Command::Verify(a) => run_verify(a),
        Command::Orders(a) => run_orders(a),
        Command::Blocks(a) => run_blocks(a),
    }
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("cannot parse {what} {x:?}")))
        })
        .collect()
}

fn parse_system(a: &SystemArgs) -> Result<WeightSystem, Failure> {
    if a.normalized {
        if a.degree.is_some() {
            return Err(Failure::Usage("--normalized and --degree are exclusive".into()));
        }
        let fracs = a
            .weights
            .split(',')
            .map(|f| {
                let (s, t) = f
                    .trim()
                    .split_once('/')
                    .ok_or_else(|| Failure::Usage(format!("expected a fraction s/t, got {f:?}")))?;
                let s = s.parse().map_err(|_| Failure::Usage(format!("bad numerator in {f:?}")))?;
                let t = t.parse().map_err(|_| Failure::Usage(format!("bad denominator in {f:?}")))?;
                Ok((s, t))
            })
            .collect::<Result<Vec<(u64, u64)>, Failure>>()?;
        Ok(WeightSystem::from_normalized(&fracs)?)
    } else {
        let d = a
            .degree
            .ok_or_else(|| Failure::Usage("--degree is required unless --normalized is given".into()))?;
        Ok(WeightSystem::new(parse_list(&a.weights, "weight")?, d)?)
    }
}

fn emit(output: &Output, text: &str) -> Outcome {
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
            _ => {}
        },
    }
    Ok(())
}

fn format_or(output: &Output, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = output.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Usage("this command does not support that --format".into()))
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn engine_config(e: &EngineArgs) -> Result<EngineConfig, Failure> {
    if e.workers == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    if e.resume && e.checkpoint.is_none() {
        return Err(Failure::Usage("--resume needs --checkpoint".into()));
    }
    let mut config = EngineConfig::new().with_workers(e.workers);
    config.prune = !e.no_prune;
    config.checkpoint = e.checkpoint.clone();
    config.resume = e.resume;
    if let Some(rate) = e.audit {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Failure::Usage("--audit must lie in [0, 1]".into()));
        }
        config.audit = Some((rate, e.seed));
    }
    Ok(config)
}

fn run_analyze(a: SystemArgs) -> Outcome {
    let ws = parse_system(&a)?;
    let report = analyze(&ws)?;
    let text = match format_or(&a.output, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => pretty(&serde_json::to_value(&report).expect("report serializes")),
        _ => report.to_text(),
    };
    emit(&a.output, &text)
}

fn rows_output(rows: &[CensusRow], n: usize, summary: serde_json::Value, format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({ "summary": summary, "rows": rows })),
        _ => {
            let mut s = csv_header(n);
            s.push('\n');
            for r in rows {
                s.push_str(&r.to_csv());
                s.push('\n');
            }
            s
        }
    }
}

fn run_enumerate(a: EnumerateArgs) -> Outcome {
    let spec = SearchSpec::new(a.n, a.max_d)?;
    let config = engine_config(&a.engine)?;
    let format = format_or(&a.output, Format::Csv, &[Format::Csv, Format::Json])?;
    let mut rows = Vec::new();
    let summary = census::enumerate(&spec, &config, |r| {
        rows.push(r.clone());
        Ok(())
    })?;
    eprintln!("{}", summary.to_json());
    emit(&a.output, &rows_output(&rows, a.n, summary.to_json(), format))
}

fn run_table(a: TableArgs, first: bool) -> Outcome {
    let config = engine_config(&a.engine)?;
    let format = format_or(&a.output, Format::Csv, &[Format::Csv, Format::Json])?;
    let (rows, summary) = if first { census::table1(&config)? } else { census::table2(&config)? };
    let text = match format {
        Format::Json => pretty(&json!({ "summary": summary.to_json(), "rows": rows })),
        _ if first => census::table1_csv(&rows),
        _ => census::table2_csv(&rows),
    };
    emit(&a.output, &text)
}

fn run_saito(a: SaitoArgs) -> Outcome {
    let spec = SearchSpec::new(a.n, a.max_d)?;
    let config = engine_config(&a.engine)?;
    let format = format_or(&a.output, Format::Csv, &[Format::Csv, Format::Json])?;
    let mut rows = Vec::new();
    let summary = census::enumerate(&spec, &config, |r| {
        let holds = if a.weak { r.saito_weak } else { r.saito_strong };
        if !holds {
            rows.push(r.clone());
        }
        Ok(())
    })?;
    emit(&a.output, &rows_output(&rows, a.n, summary.to_json(), format))
}

fn run_verify(a: VerifyArgs) -> Outcome {
    let suite = Suite::parse(&a.suite).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown suite {:?}; expected cyclo, orders, blocks, weights, sweeps or all",
            a.suite
        ))
    })?;
    let report = run_suite(suite, a.seed)?;
    let text = match format_or(&a.output, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => pretty(&serde_json::to_value(&report).expect("report serializes")),
        _ => {
            let mut s = format!("seed {}\n", report.seed);
            for p in &report.properties {
                let status = if p.violations == 0 { "pass" } else { "FAIL" };
                s.push_str(&format!("{status}  {}  cases={} violations={}\n", p.name, p.cases, p.violations));
                for e in &p.examples {
                    s.push_str(&format!("      {e}\n"));
                }
            }
            s
        }
    };
    emit(&a.output, &text)?;
    if report.passed() {
        Ok(())
    } else {
        let failed = report.properties.iter().filter(|p| p.violations > 0).count();
        Err(Failure::Verification(format!("{failed} properties violated")))
    }
}

fn run_orders(a: SystemArgs) -> Outcome {
    let ws = parse_system(&a)?;
    check_limits(&ws)?;
    let ws = ws.reduce();
    let tuple = weight_orders(&ws)?;
    let psi = ws.psi_w();
    let compatible = map_compatible(&psi, &tuple)?;
    let text = match format_or(&a.output, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => pretty(&json!({
            "weights": ws.weights(),
            "d": ws.degree(),
            "orders": tuple,
            "compatible": compatible,
        })),
        _ => {
            let mut s = format!("{ws}\n");
            for (p, o) in tuple.iter() {
                let chain: Vec<String> = o.chain().iter().map(u32::to_string).collect();
                s.push_str(&format!("p = {p}: {}\n", chain.join(" > ")));
            }
            s.push_str(&format!("char. poly {}\ncompatible {compatible}\n", phi_product(&psi)));
            s
        }
    };
    emit(&a.output, &text)?;
    if compatible {
        Ok(())
    } else {
        Err(Failure::Verification("psi_w is not compatible with the weight orders".into()))
    }
}

fn run_blocks(a: BlocksArgs) -> Outcome {
    let sets: Vec<BTreeSet<u64>> = match a.degree {
        Some(d) => {
            let ws = WeightSystem::new(parse_list(&a.set, "weight")?, d)?;
            check_limits(&ws)?;
            let report = analyze(&ws)?;
            report
                .covering
                .ok_or_else(|| Error::Precondition("psi_w has negative or fractional multiplicities".into()))?
                .into_iter()
                .map(|m| m.into_iter().collect())
                .collect()
        }
        None => vec![parse_list(&a.set, "element")?.into_iter().collect()],
    };
    let mut entries = Vec::new();
    for m in &sets {
        let verdict = build_graph(m)?.verdict();
        let block = orlik_block(m)?;
        entries.push((verdict, block));
    }
    let text = match format_or(&a.output, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => pretty(&serde_json::Value::Array(
            entries
                .iter()
                .map(|(v, b)| {
                    let mut obj = serde_json::to_value(v).expect("verdict serializes");
                    obj["rank"] = json!(b.rank);
                    obj["charpoly"] = json!(b.charpoly.to_string());
                    obj
                })
                .collect(),
        )),
        _ => {
            let mut s = String::new();
            let mut k = 0;
            while k < entries.len() {
                let (v, b) = &entries[k];
                let run = entries[k..].iter().take_while(|(w, _)| w.set == v.set).count();
                k += run;
                let set: Vec<String> = v.set.iter().map(u64::to_string).collect();
                s.push_str(&format!(
                    "M = {{{}}}  rank {}  connected {}  condition (I) {}  condition (II) {}",
                    set.join(","),
                    b.rank,
                    v.connected,
                    v.condition_i,
                    v.condition_ii
                ));
                if let Some(f) = &v.failing_condition {
                    s.push_str(&format!("  fails {f}"));
                }
                if run > 1 {
                    s.push_str(&format!("  (x{run})"));
                }
                s.push('\n');
            }
            s
        }
    };
    emit(&a.output, &text)
}
