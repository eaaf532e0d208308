use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lndkit::dualgraph::{build_paper_compactification, WeightedCurveGraph};
use lndkit::derivations::DEFAULT_NILPOTENCY_BOUND;
use lndkit_cli::{cocycle_command, exp_command, fiber_command, report_json, report_text, run_suite, Selection, BOUND_ENV};

#[derive(Parser)]
#[command(name = "lndkit", version, about = "Exact verification of locally nilpotent derivation computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in verification cases.
    Verify {
        /// Case ids to run (default: all).
        #[arg(long, num_args = 1..)]
        only: Vec<String>,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Show per-case wall time in the text report.
        #[arg(long)]
        timings: bool,
        /// List case ids and exit.
        #[arg(long)]
        list: bool,
    },
    /// Print exp(m·d) for a derivation file.
    Exp {
        #[arg(long)]
        derivation: PathBuf,
        #[arg(long)]
        multiplier: String,
        #[arg(long, env = BOUND_ENV, default_value_t = DEFAULT_NILPOTENCY_BOUND)]
        bound: usize,
    },
    /// Decompose the fiber of the surface over x = a.
    Fiber {
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Print the transition cocycle and the distinguishing-function search.
    Cocycle {
        #[arg(long, default_value_t = 5)]
        max_n: u32,
    },
    /// Build or check weighted dual graphs.
    Graph(GraphArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Build the compactification with a section of weight -N.
    #[arg(long, value_name = "N")]
    build_paper: Option<u32>,
    /// Read a graph in `vertex`/`edge` format.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, value_enum)]
    check: Option<GraphCheck>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphCheck {
    Fiber,
    Chain,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify { only, json, timings, list } => {
            if list {
                for c in lndkit_cli::registry() {
                    println!("{:<26} {:<13} {}", c.id, format!("{:?}", c.category).to_lowercase(), c.description);
                }
                return Ok(ExitCode::SUCCESS);
            }
            let sel = if only.is_empty() { Selection::All } else { Selection::Only(only) };
            let report = run_suite(&sel)?;
            match json.as_deref() {
                Some(p) if p.as_os_str() == "-" => print!("{}", report_json(&report)),
                Some(p) => {
                    std::fs::write(p, report_json(&report)).with_context(|| format!("writing {}", p.display()))?;
                    print!("{}", report_text(&report, timings));
                }
                None => print!("{}", report_text(&report, timings)),
            }
            Ok(if report.success() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Exp { derivation, multiplier, bound } => {
            let map = exp_command(&read(&derivation)?, &multiplier, bound)?;
            print!("{map}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Fiber { at } => {
            print!("{}", fiber_command(&at)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Cocycle { max_n } => {
            print!("{}", cocycle_command(max_n));
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph(args) => {
            let g = match (args.source.build_paper, &args.source.input) {
                (Some(n), _) => build_paper_compactification(n),
                (None, Some(p)) => WeightedCurveGraph::parse(&read(p)?)?,
                (None, None) => bail!("one of --build-paper or --input is required"),
            };
            match args.check {
                None => print!("{g}"),
                Some(GraphCheck::Chain) => println!("chain: {}", g.is_chain()),
                Some(GraphCheck::Fiber) => {
                    let s = g.can_contract_to_fiber();
                    println!("fiber: {}", s.contractible);
                    if s.contractible && !s.trace.is_empty() {
                        println!("contract: {}", s.trace.join(" "));
                    }
                    println!("states explored: {}", s.states_explored);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
