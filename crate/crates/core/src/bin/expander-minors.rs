//! Command-line front end: generate graphs, extract expanders, search for
//! small minors and subdivisions, verify witnesses and run sweeps.
//!
//! Exit codes: 0 when a witness was produced (or a check passed), 2 when
//! nothing was found or a construction stalled, 1 on usage or input errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use expander_minors::expansion::{
    extract_expander_with, DerivedScales, ExpansionParams, ExtractOptions, ExtractionMode,
    SearchBudget,
};
use expander_minors::graph::{average_degree, Density, Graph};
use expander_minors::harness::{
    generate, run_experiment_sweep, write_csv, write_json, Family, GeneratorSpec, GraphMetadata,
    SweepMode,
};
use expander_minors::io::{read_graph, write_dimacs, write_edge_list};
use expander_minors::minor::{find_minor_pipeline_with, MinorModel, MinorPipelineOptions};
use expander_minors::subdivision::{
    find_subdivision_pipeline_with, SubdivisionMode, SubdivisionModel, SubdivisionPipelineOptions,
};
use expander_minors::verify::{
    brute_force_expander_check, brute_force_find_minor, brute_force_find_subdivision,
    verify_minor_model, verify_subdivision,
};
use expander_minors::Error;

#[derive(Parser)]
#[command(
    name = "expander-minors",
    version,
    about = "Small K_t minors and subdivisions in expanders"
)]
struct Cli {
    /// Log construction progress to stderr and keep step traces in the output.
    #[arg(long, global = true)]
    trace: bool,
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and print it as an edge list.
    Gen(GenArgs),
    /// Peel the input down to an expander subgraph.
    ExtractExpander(ExtractArgs),
    /// Look for a small K_t minor.
    FindMinor(FindArgs),
    /// Look for a small K_t subdivision.
    FindSubdivision(FindSubdivisionArgs),
    /// Check a witness JSON file against a graph.
    Verify(VerifyArgs),
    /// Answer by exhaustive search on a tiny graph.
    Oracle(OracleArgs),
    /// Run a pipeline over generated graphs and persist one record per run.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Edge list (`u v` per line) or DIMACS file.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    /// Practical size floor at which extraction stops.
    #[arg(long, default_value_t = 32)]
    floor: usize,
    /// Wall-clock cap for each violating-set search; runs that hit it are not reproducible.
    #[arg(long)]
    budget_ms: Option<u64>,
}

impl SearchArgs {
    fn extract_options(&self, trace: bool) -> ExtractOptions {
        ExtractOptions {
            floor: self.floor,
            budget: SearchBudget {
                time_limit_ms: self.budget_ms,
                ..SearchBudget::default()
            },
            record_trace: trace,
            ..ExtractOptions::default()
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value = "gnp_avg_degree")]
    family: Family,
    #[arg(long)]
    n: usize,
    /// Average degree, regularity or blob edge probability, by family.
    #[arg(long, default_value_t = 0.0)]
    param: f64,
    #[arg(long, default_value_t = 1)]
    blob_count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Source file for the `file` family.
    #[arg(long)]
    path: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = GraphFormat::EdgeList)]
    format: GraphFormat,
    /// Write the graph here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    EdgeList,
    Dimacs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExtractMode {
    Plain,
    SmallSet,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 4)]
    t: usize,
    /// Allowed relative density loss.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Expansion exponent; defaults to 1/8t (plain) or 1/300t^3 (small-set).
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, value_enum, default_value_t = ExtractMode::Plain)]
    mode: ExtractMode,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct FindArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 4)]
    t: usize,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct FindSubdivisionArgs {
    #[command(flatten)]
    find: FindArgs,
    /// `subdivision` or `minor-or-subdivision`.
    #[arg(long, default_value = "subdivision")]
    mode: SubdivisionMode,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessKind {
    Minor,
    Subdivision,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Witness JSON as written by find-minor or find-subdivision.
    #[arg(long)]
    witness: PathBuf,
    /// Witness type; guessed from the JSON keys when absent.
    #[arg(long, value_enum)]
    kind: Option<WitnessKind>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Minor,
    Subdivision,
    Expander,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = OracleKind::Minor)]
    kind: OracleKind,
    #[arg(long, default_value_t = 3)]
    t: usize,
    /// Density loss used for the expansion rate (`expander` only).
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Expansion exponent (`expander` only); defaults to 1/8t.
    #[arg(long)]
    eta: Option<f64>,
    /// Expansion rate to test instead of f(m) (`expander` only).
    #[arg(long)]
    rate: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "gnp_avg_degree")]
    family: Family,
    /// Comma-separated orders.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 40.0)]
    param: f64,
    #[arg(long, default_value_t = 1)]
    blob_count: usize,
    /// Runs per size, with seeds `seed..seed + seeds`.
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    t: usize,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// `minor`, `subdivision` or `minor-or-subdivision`.
    #[arg(long, default_value = "minor")]
    mode: SweepMode,
    #[arg(long)]
    csv_out: Option<PathBuf>,
}

/// How a command ended, mapped to the process exit code.
enum Status {
    Found,
    NotFound,
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors; 2 is reserved for "not found" here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = if cli.trace { "debug" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok((value, status)) => {
            if let Err(e) = emit(&value, cli.json_out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            match status {
                Status::Found => ExitCode::SUCCESS,
                Status::NotFound => ExitCode::from(2),
            }
        }
        Err(e @ (Error::Stalled { .. } | Error::GraphExhausted(_))) => {
            eprintln!("not found: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(value: &Value, json_out: Option<&FsPath>) -> expander_minors::Result<()> {
    if value.is_null() {
        return Ok(());
    }
    let text = serde_json::to_string_pretty(value)?;
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    if let Some(path) = json_out {
        std::fs::write(path, text + "\n")?;
    }
    Ok(())
}

fn load(path: &FsPath) -> expander_minors::Result<Graph> {
    read_graph(path).map_err(|e| match e {
        Error::Io(e) => Error::InvalidParameter(format!("{}: {e}", path.display())),
        e => e,
    })
}

fn density_json(d: Density) -> Value {
    json!({ "exact": format!("{}/{}", d.numer(), d.denom()), "value": *d.numer() as f64 / *d.denom() as f64 })
}

fn run(cli: &Cli) -> expander_minors::Result<(Value, Status)> {
    match &cli.command {
        Command::Gen(a) => gen(a, cli.json_out.as_deref()),
        Command::ExtractExpander(a) => extract(a, cli.trace),
        Command::FindMinor(a) => find_minor(a, cli.trace),
        Command::FindSubdivision(a) => find_subdivision(a, cli.trace),
        Command::Verify(a) => verify(a),
        Command::Oracle(a) => oracle(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn gen(a: &GenArgs, json_out: Option<&FsPath>) -> expander_minors::Result<(Value, Status)> {
    let spec = GeneratorSpec {
        family: a.family,
        n: a.n,
        param: a.param,
        blob_count: a.blob_count,
        seed: a.seed,
        path: a.path.clone(),
    };
    let g = generate(&spec)?;
    let write = |out: &mut dyn Write| match a.format {
        GraphFormat::EdgeList => write_edge_list(&g, out),
        GraphFormat::Dimacs => write_dimacs(&g, out),
    };
    match &a.out {
        Some(path) => write(&mut BufWriter::new(File::create(path)?))?,
        None => write(&mut io::stdout().lock())?,
    }
    let meta = GraphMetadata::of(&g);
    log::info!("generated {meta:?}");
    if let Some(path) = json_out {
        std::fs::write(
            path,
            serde_json::to_string_pretty(&json!({ "spec": spec, "metadata": meta }))? + "\n",
        )?;
    }
    Ok((Value::Null, Status::Found))
}

fn extract(a: &ExtractArgs, trace: bool) -> expander_minors::Result<(Value, Status)> {
    let g = load(&a.input.input)?;
    let small = a.mode == ExtractMode::SmallSet;
    let mut p = if small {
        ExpansionParams::for_subdivision(a.t, a.epsilon, g.n())?
    } else {
        ExpansionParams::for_minor(a.t, a.epsilon, g.n())?
    };
    if let Some(eta) = a.eta {
        p.eta = eta;
        p.validate()?;
    }
    let r = extract_expander_with(&g, &p, small, &a.search.extract_options(trace))?;
    let value = json!({
        "mode": r.mode,
        "params": p,
        "input_density": density_json(r.input_density),
        "achieved_density": density_json(r.achieved_density),
        "order": r.subgraph.n(),
        "edges": r.subgraph.edge_count(),
        "min_degree": r.subgraph.min_degree(),
        "vertices": r.map.host_vertices(),
        "trace": if trace { json!(r.trace) } else { Value::Null },
    });
    let status = if r.mode == ExtractionMode::BelowThreshold {
        Status::NotFound
    } else {
        Status::Found
    };
    Ok((value, status))
}

fn find_minor(a: &FindArgs, trace: bool) -> expander_minors::Result<(Value, Status)> {
    let g = load(&a.input.input)?;
    let opts = MinorPipelineOptions {
        extract: a.search.extract_options(trace),
        ..MinorPipelineOptions::default()
    };
    let mut r = find_minor_pipeline_with(&g, a.t, a.epsilon, &opts)?;
    if !trace {
        if let Some(m) = r.model.as_mut() {
            m.stage_trace = None;
        }
    }
    let status = match &r.model {
        Some(m) if verify_minor_model(&g, m).valid => Status::Found,
        Some(_) => return Err(Error::Internal("emitted model failed verification".into())),
        None => Status::NotFound,
    };
    Ok((serde_json::to_value(&r)?, status))
}

fn find_subdivision(
    a: &FindSubdivisionArgs,
    trace: bool,
) -> expander_minors::Result<(Value, Status)> {
    let g = load(&a.find.input.input)?;
    let opts = SubdivisionPipelineOptions {
        mode: a.mode,
        extract: a.find.search.extract_options(trace),
        ..SubdivisionPipelineOptions::default()
    };
    let r = find_subdivision_pipeline_with(&g, a.find.t, a.find.epsilon, &opts)?;
    let valid = match (&r.subdivision, &r.minor) {
        (Some(s), _) => Some(verify_subdivision(&g, s).valid),
        (None, Some(m)) => Some(verify_minor_model(&g, m).valid),
        (None, None) => None,
    };
    let status = match valid {
        Some(true) => Status::Found,
        Some(false) => {
            return Err(Error::Internal(
                "emitted witness failed verification".into(),
            ))
        }
        None => Status::NotFound,
    };
    Ok((serde_json::to_value(&r)?, status))
}

fn verify(a: &VerifyArgs) -> expander_minors::Result<(Value, Status)> {
    let g = load(&a.input.input)?;
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&a.witness)?)?;
    // Pipeline output wraps the witness; accept either form.
    for key in ["model", "subdivision"] {
        if doc.get(key).is_some_and(|v| !v.is_null()) {
            doc = doc[key].take();
            break;
        }
    }
    let kind = match a.kind {
        Some(k) => k,
        None if doc.get("branch_sets").is_some() => WitnessKind::Minor,
        None if doc.get("corners").is_some() => WitnessKind::Subdivision,
        None => {
            return Err(Error::InvalidParameter(
                "cannot tell the witness type; pass --kind".into(),
            ))
        }
    };
    let report = match kind {
        WitnessKind::Minor => verify_minor_model(&g, &serde_json::from_value::<MinorModel>(doc)?),
        WitnessKind::Subdivision => {
            verify_subdivision(&g, &serde_json::from_value::<SubdivisionModel>(doc)?)
        }
    };
    let status = if report.valid {
        Status::Found
    } else {
        Status::NotFound
    };
    Ok((serde_json::to_value(&report)?, status))
}

fn oracle(a: &OracleArgs) -> expander_minors::Result<(Value, Status)> {
    let g: Graph = load(&a.input.input)?;
    let (value, found) = match a.kind {
        OracleKind::Minor => {
            let m = brute_force_find_minor(&g, a.t)?;
            (json!({ "has_minor": m.is_some(), "model": m }), m.is_some())
        }
        OracleKind::Subdivision => {
            let s = brute_force_find_subdivision(&g, a.t)?;
            (
                json!({ "has_subdivision": s.is_some(), "subdivision": s }),
                s.is_some(),
            )
        }
        OracleKind::Expander => {
            let mut p = ExpansionParams::for_minor(a.t, a.epsilon, g.n())?;
            if let Some(eta) = a.eta {
                p.eta = eta;
                p.validate()?;
            }
            let rate = match a.rate {
                Some(r) => r,
                None => DerivedScales::new(g.n(), &p)?.rate(&p),
            };
            let c = brute_force_expander_check(&g, rate, p.eta, None)?;
            let holds = c.holds;
            (
                json!({ "rate": rate, "eta": p.eta, "density": density_json(average_degree(&g)?), "check": c }),
                holds,
            )
        }
    };
    Ok((
        value,
        if found {
            Status::Found
        } else {
            Status::NotFound
        },
    ))
}

fn sweep(a: &SweepArgs) -> expander_minors::Result<(Value, Status)> {
    let specs: Vec<GeneratorSpec> = a
        .sizes
        .iter()
        .flat_map(|&n| {
            (a.seed..a.seed + a.seeds).map(move |seed| GeneratorSpec {
                family: a.family,
                n,
                param: a.param,
                blob_count: a.blob_count,
                seed,
                path: None,
            })
        })
        .collect();
    let records = run_experiment_sweep(&specs, a.t, a.epsilon, a.mode);
    if let Some(path) = &a.csv_out {
        write_csv(&records, BufWriter::new(File::create(path)?))?;
    }
    let mut buf = Vec::new();
    write_json(&records, &mut buf)?;
    let status = if records.iter().any(|r| r.has_witness()) {
        Status::Found
    } else {
        Status::NotFound
    };
    Ok((serde_json::from_slice(&buf)?, status))
}
