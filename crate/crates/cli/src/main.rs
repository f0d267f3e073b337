use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, CommandFactory, Parser, Subcommand};
use ed_core::best_response::exploitability_report;
use ed_core::game::Player;
use ed_core::games::{load_tree, GameId};
use ed_core::harness::{merge_curves, parse_settings, ExperimentConfig, HarnessError, NamedCurve};
use ed_core::policy::PolicyDocument;
use ed_core::solvers::Algorithm;

/// Equilibrium solvers for two-player zero-sum extensive-form games.
#[derive(Parser)]
#[command(name = "edsolve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver and write its convergence curve as CSV.
    Solve(SolveArgs),
    /// Print NashConv and per-player exploitability of a policy file.
    Eval(EvalArgs),
    /// Merge convergence CSVs into one long-format table.
    Compare(CompareArgs),
    /// List the benchmark games.
    Games,
}

#[derive(Args)]
struct SolveArgs {
    /// Key = value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    game: Option<String>,
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    iterations: Option<usize>,
    /// Record every k iterations instead of at powers of two.
    #[arg(long)]
    eval_every: Option<usize>,
    /// Constant step size, `sqrt` or `sqrt:SCALE` for SCALE/√t.
    #[arg(long)]
    lr: Option<String>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the final reported policy as JSON.
    #[arg(long)]
    policy_out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Fixed seed and zero wall times for byte-identical output.
    #[arg(long)]
    deterministic: bool,
    /// `error` or `fallback` for zero reach mass in ed_q_l2.
    #[arg(long)]
    zero_mass: Option<String>,
    #[arg(long)]
    hidden_layers: Option<usize>,
    #[arg(long)]
    hidden_width: Option<usize>,
    #[arg(long)]
    weight_decay: Option<f64>,
    /// `fan_in` or `zeros`.
    #[arg(long)]
    init: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    /// Policy JSON file.
    policy: PathBuf,
    /// Game to evaluate on; defaults to the game named in the file.
    #[arg(long)]
    game: Option<String>,
}

#[derive(Args)]
struct CompareArgs {
    files: Vec<PathBuf>,
    /// Merged CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error plus the exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

fn runtime(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, error: error.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Eval(args) => eval(args),
        Command::Compare(args) => compare(args),
        Command::Games => games(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            if f.code == 2 {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            ExitCode::from(f.code)
        }
    }
}

fn settings(args: &SolveArgs) -> Result<BTreeMap<String, String>, HarnessError> {
    let mut map = match &args.config {
        Some(path) => parse_settings(&fs::read_to_string(path)?)?,
        None => BTreeMap::new(),
    };
    let flags = [
        ("game", args.game.clone()),
        ("algorithm", args.algorithm.clone()),
        ("iterations", args.iterations.map(|v| v.to_string())),
        ("eval_every", args.eval_every.map(|v| v.to_string())),
        ("lr", args.lr.clone()),
        ("out", args.out.as_ref().map(|p| p.display().to_string())),
        ("policy_out", args.policy_out.as_ref().map(|p| p.display().to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        ("zero_mass", args.zero_mass.clone()),
        ("hidden_layers", args.hidden_layers.map(|v| v.to_string())),
        ("hidden_width", args.hidden_width.map(|v| v.to_string())),
        ("weight_decay", args.weight_decay.map(|v| v.to_string())),
        ("init", args.init.clone()),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            map.insert(k.to_string(), v);
        }
    }
    let env_deterministic = std::env::var("ED_DETERMINISTIC").is_ok_and(|v| v == "1");
    if args.deterministic || env_deterministic {
        map.insert("deterministic".into(), "true".into());
    }
    Ok(map)
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let map = settings(&args).map_err(usage)?;
    let config = ExperimentConfig::from_settings(&map).map_err(usage)?;
    let (output, curve) = config.execute().map_err(runtime)?;
    match &config.out {
        Some(path) => curve
            .save(path)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(runtime)?,
        None => print!("{}", curve.to_csv_string()),
    }
    if let Some(path) = &config.policy_out {
        let tree = load_tree(config.game.as_str()).map_err(runtime)?;
        let doc = PolicyDocument::from_joint(&tree, &output.report);
        fs::write(path, doc.to_json())
            .with_context(|| format!("writing {}", path.display()))
            .map_err(runtime)?;
    }
    Ok(())
}

fn eval(args: EvalArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.policy)
        .with_context(|| format!("reading {}", args.policy.display()))
        .map_err(runtime)?;
    let doc = PolicyDocument::from_json(&text).map_err(runtime)?;
    let game: GameId = args.game.as_deref().unwrap_or(&doc.game).parse().map_err(usage)?;
    let tree = load_tree(game.as_str()).map_err(runtime)?;
    let joint = doc.joint(&tree).map_err(runtime)?;
    let rep = exploitability_report(&tree, &joint).map_err(runtime)?;
    println!("game: {}", tree.name());
    println!("nashconv: {:.11e}", rep.nash_conv);
    println!("exploitability_p0: {:.11e}", rep.exploitability[0]);
    println!("exploitability_p1: {:.11e}", rep.exploitability[1]);
    println!("value_p0: {:.11e}", rep.values[Player::P0.index()]);
    Ok(())
}

fn compare(args: CompareArgs) -> Result<(), Failure> {
    let curves = args
        .files
        .iter()
        .map(|p| NamedCurve::load(p).with_context(|| format!("reading {}", p.display())))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let merged = merge_curves(&curves).map_err(usage)?;
    match &args.out {
        Some(path) => fs::write(path, merged)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(runtime),
        None => {
            print!("{merged}");
            Ok(())
        }
    }
}

fn games() -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "game\tinfostates_p0\tinfostates_p1\tnodes").map_err(runtime)?;
    for id in GameId::ALL {
        let tree = load_tree(id.as_str()).map_err(runtime)?;
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            id,
            tree.num_infostates(Player::P0),
            tree.num_infostates(Player::P1),
            tree.num_nodes()
        )
        .map_err(runtime)?;
    }
    writeln!(out).map_err(runtime)?;
    let ids: Vec<&str> = Algorithm::ALL.iter().map(|a| a.as_str()).collect();
    writeln!(out, "algorithms: {}", ids.join(", ")).map_err(runtime)?;
    Ok(())
}
