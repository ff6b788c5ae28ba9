use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod bench;
mod commands;

use commands::CliError;

/// Count independent sets of bipartite graphs, exactly or approximately.
#[derive(Debug, Parser)]
#[command(name = "bis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact count by subset enumeration over the smaller side.
    Exact {
        file: PathBuf,
        /// Largest enumerated side.
        #[arg(long, default_value_t = bis_core::exact::DEFAULT_CAP)]
        cap: usize,
    },
    /// Approximate ln Z with the depth-bounded ratio recursion.
    Count(CountArgs),
    /// Run the approximation and the exact oracle side by side.
    Compare {
        file: PathBuf,
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value_t = bis_core::exact::DEFAULT_CAP)]
        cap: usize,
    },
    /// Numerically check the decay-rate bounds.
    VerifyDecay(VerifyArgs),
    /// Write benchmark tables as CSV.
    Bench {
        /// `error-vs-depth` or `time-vs-size`.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Generate a graph file.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "mode")]
struct DepthMode {
    /// Target relative accuracy; picks the depth that guarantees it.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Fixed recursion depth (no a priori accuracy guarantee).
    #[arg(long)]
    depth: Option<u32>,
}

#[derive(Debug, Args)]
struct CountArgs {
    file: PathBuf,
    #[command(flatten)]
    mode: DepthMode,
    /// Allow graphs where both sides have maximum degree above 5.
    #[arg(long = "unsafe")]
    allow_unsafe: bool,
    /// Abort after visiting this many recursion nodes. Defaults to 10^9 with
    /// --epsilon and to no limit with --depth.
    #[arg(long)]
    max_nodes: Option<u64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0.9616)]
    alpha: f64,
    /// Base of the depth accounting.
    #[arg(long = "M", default_value_t = 45)]
    branch_base: u64,
    /// Random points for the sampled checks.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = bis_core::decay::SuiteConfig::default().seed)]
    seed: u64,
    /// Print the full suite as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Family {
    /// Random graph with bounded left degree.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Largest left degree (at most 5).
        #[arg(long, default_value_t = 5)]
        delta: usize,
        /// `bounded:<k>` or `heavy`.
        #[arg(long, default_value = "heavy")]
        style: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete bipartite graph K_{a,b}.
    Complete {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Path on k vertices.
    Path {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Even cycle on len vertices.
    Cycle {
        #[arg(long)]
        len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("BIS_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::usage(format!("BIS_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(e.to_string()))
}

fn run(cli: Cli, echo: Vec<String>) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Exact { file, cap } => commands::exact(&file, cap, echo),
        Command::Count(args) => commands::count(
            &args.file,
            args.mode.epsilon,
            args.mode.depth,
            args.allow_unsafe,
            args.max_nodes,
            echo,
        ),
        Command::Compare { file, depth, cap } => commands::compare(&file, depth, cap, echo),
        Command::VerifyDecay(args) => commands::verify_decay(
            args.alpha,
            args.branch_base,
            args.samples,
            args.seed,
            args.json,
        ),
        Command::Bench { suite, out, seed } => bench::run(&suite, &out, seed),
        Command::Gen { family } => match family {
            Family::Random { n, m, delta, style, seed, out } => {
                commands::gen_random(n, m, delta, &style, seed, out.as_deref())
            }
            Family::Complete { a, b, out } => {
                commands::write_graph(&bis_core::generate::gen_complete(a, b), out.as_deref())
            }
            Family::Path { k, out } => {
                commands::write_graph(&bis_core::generate::gen_path(k), out.as_deref())
            }
            Family::Cycle { len, out } => commands::gen_cycle(len, out.as_deref()),
        },
    }
}

fn main() -> ExitCode {
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli, echo) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
