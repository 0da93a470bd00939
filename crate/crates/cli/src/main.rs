//! `ent-evolve`: evaluate and rewrite tensor-network files, measure states,
//! build Choi states and run seeded verification campaigns.
//!
//! Exit codes: 0 success or passing check, 1 failed check, 2 usage or parse
//! error, 3 input that parses but is semantically invalid.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ent_evolve::campaign::{run_campaign, CampaignConfig, CampaignError, Check};
use ent_evolve::entanglement::{g_concurrence_pure, FactorizationMode};
use ent_evolve::network::{
    evaluate_with_stats, plan_exhaustive, plan_greedy, rewrite_snake, NetworkFile, RewriteEvent, Signature,
};
use ent_evolve::quantum::{choi_state, ChannelFile, MatrixFile, StateFile};
use ent_evolve::tensor::{Tensor, Variance};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SEMANTIC: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "ent-evolve", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Contract a network file and print the resulting tensor.
    Contract {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = PlanKind::Greedy)]
        plan: PlanKind,
        /// Include plan cost and evaluation counts in the output.
        #[arg(long)]
        stats: bool,
    },
    /// Apply wire rewrites until none applies; print the network and the events.
    Rewrite { file: PathBuf },
    /// Run a seeded verification campaign.
    Verify {
        #[arg(value_enum)]
        check: CheckArg,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Factorization mode: two-qubit-exact, single-kraus-pure or sampled-upper-bound.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Sampled decompositions per convex roof.
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// G-concurrence of a pure state file.
    Gconc { file: PathBuf },
    /// Choi state of a channel file.
    Choi { file: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlanKind {
    Greedy,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckArg {
    Factorization,
    UpperBound,
    Duality,
    SlInvariance,
    Lemma,
    Choi,
}

impl From<CheckArg> for Check {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::Factorization => Check::Factorization,
            CheckArg::UpperBound => Check::UpperBound,
            CheckArg::Duality => Check::Duality,
            CheckArg::SlInvariance => Check::SlInvariance,
            CheckArg::Lemma => Check::Lemma,
            CheckArg::Choi => Check::Choi,
        }
    }
}

/// Error carrying its exit code.
struct Fail {
    code: u8,
    message: String,
}

fn usage(e: impl Display) -> Fail {
    Fail { code: EXIT_USAGE, message: e.to_string() }
}

fn semantic(e: impl Display) -> Fail {
    Fail { code: EXIT_SEMANTIC, message: e.to_string() }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Fail> {
    serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output types serialize")
}

fn variance_name(v: Variance) -> &'static str {
    match v {
        Variance::Up => "up",
        Variance::Down => "down",
    }
}

#[derive(Serialize)]
struct TensorOut {
    dims: Vec<usize>,
    variance: Vec<&'static str>,
    data: Vec<[f64; 2]>,
}

impl From<&Tensor> for TensorOut {
    fn from(t: &Tensor) -> Self {
        Self {
            dims: t.dims(),
            variance: t.indices().iter().map(|i| variance_name(i.variance())).collect(),
            data: t.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

#[derive(Serialize)]
struct StatsOut {
    plan: &'static str,
    steps: Vec<usize>,
    estimated_cost: f64,
    multiply_adds: f64,
    contractions: usize,
}

#[derive(Serialize)]
struct ContractOut {
    tensor: TensorOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<StatsOut>,
}

#[derive(Serialize)]
struct EventOut {
    rule: &'static str,
    nodes: Vec<usize>,
    edges: Vec<[[usize; 2]; 2]>,
    before: Vec<(usize, &'static str)>,
    after: Vec<(usize, &'static str)>,
}

fn signature_out(s: &Signature) -> Vec<(usize, &'static str)> {
    s.iter().map(|&(d, v)| (d, variance_name(v))).collect()
}

impl From<&RewriteEvent> for EventOut {
    fn from(e: &RewriteEvent) -> Self {
        Self {
            rule: e.rule,
            nodes: e.nodes.clone(),
            edges: e.edges.iter().map(|x| [[x.0.node, x.0.leg], [x.1.node, x.1.leg]]).collect(),
            before: signature_out(&e.before),
            after: signature_out(&e.after),
        }
    }
}

#[derive(Serialize)]
struct RewriteOut {
    network: NetworkFile,
    events: Vec<EventOut>,
}

fn contract(file: &Path, plan: PlanKind, stats: bool) -> Result<(), Fail> {
    let g = parse::<NetworkFile>(file)?.into_graph().map_err(semantic)?;
    let (name, p) = match plan {
        PlanKind::Greedy => ("greedy", plan_greedy(&g)),
        PlanKind::Exhaustive => ("exhaustive", plan_exhaustive(&g).map_err(semantic)?),
    };
    let (tensor, s) = evaluate_with_stats(&g, Some(&p)).map_err(semantic)?;
    let stats = stats.then(|| StatsOut {
        plan: name,
        steps: p.steps.clone(),
        estimated_cost: p.estimated_cost,
        multiply_adds: s.multiply_adds,
        contractions: s.steps,
    });
    println!("{}", to_json(&ContractOut { tensor: (&tensor).into(), stats }));
    Ok(())
}

fn rewrite(file: &Path) -> Result<(), Fail> {
    let g = parse::<NetworkFile>(file)?.into_graph().map_err(semantic)?;
    let (out, events) = rewrite_snake(&g);
    let out = RewriteOut { network: NetworkFile::from_graph(&out), events: events.iter().map(Into::into).collect() };
    println!("{}", to_json(&out));
    Ok(())
}

fn gconc(file: &Path) -> Result<(), Fail> {
    let psi = parse::<StateFile>(file)?.into_state().map_err(semantic)?;
    let value = g_concurrence_pure(&psi).map_err(semantic)?;
    println!("{}", to_json(&value));
    Ok(())
}

fn choi(file: &Path) -> Result<(), Fail> {
    let c = parse::<ChannelFile>(file)?.into_channel().map_err(semantic)?;
    let rho = choi_state(&c).map_err(semantic)?;
    println!("{}", to_json(&MatrixFile::from_matrix(rho.matrix())));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify(
    check: Check,
    dim: usize,
    trials: u64,
    seed: u64,
    mode: Option<String>,
    tolerance: Option<f64>,
    budget: usize,
    out: Option<PathBuf>,
    format: Format,
) -> Result<bool, Fail> {
    let trials = usize::try_from(trials).map_err(usage)?;
    let mut config = CampaignConfig::new(check, dim, trials, seed);
    config.mode = mode.as_deref().map(str::parse::<FactorizationMode>).transpose().map_err(usage)?;
    config.tolerance = tolerance;
    config.budget = budget;
    let result = run_campaign(&config).map_err(|e| match e {
        CampaignError::ThreadPool(_) => semantic(e),
        other => usage(other),
    })?;
    let text = match format {
        Format::Json => format!("{}\n", result.report.to_json()),
        Format::Csv => result.to_csv(),
    };
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(result.report.pass)
}

fn run(cli: Cli) -> Result<bool, Fail> {
    match cli.command {
        Command::Contract { file, plan, stats } => contract(&file, plan, stats).map(|_| true),
        Command::Rewrite { file } => rewrite(&file).map(|_| true),
        Command::Verify { check, dim, trials, seed, mode, tolerance, budget, out, format } => {
            verify(check.into(), dim, trials, seed, mode, tolerance, budget, out, format)
        }
        Command::Gconc { file } => gconc(&file).map(|_| true),
        Command::Choi { file } => choi(&file).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(fail) => {
            eprintln!("ent-evolve: {}", fail.message);
            ExitCode::from(fail.code)
        }
    }
}
