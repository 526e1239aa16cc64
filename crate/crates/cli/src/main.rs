use std::path::PathBuf;
use std::process::ExitCode;

use choquet_cli::aggregate::{self, AggregateJob};
use choquet_cli::verify::{self, Suite, VerifyJob};
use choquet_cli::{emit, CliResult, OutputFormat};
use clap::{Args, Parser, Subcommand};

/// Choquet-like aggregation of scalars, intervals and vectors, and grid
/// verification of its well-definedness, monotonicity and aggregation laws.
#[derive(Parser)]
#[command(name = "choquet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Aggregate every record of a dataset.
    ///
    /// Exit status: 0 ok, 2 some row inconsistent (values still written),
    /// 1 on parse or validation errors.
    Aggregate(AggregateArgs),
    /// Run a verification suite.
    ///
    /// Exit status: 0 all reports pass, 3 some report fails, 1 on config errors.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AggregateArgs {
    /// Dataset: CSV (scalars) or JSON (any carrier).
    #[arg(long)]
    input: PathBuf,
    /// Capacity JSON; defaults to the cardinality capacity.
    #[arg(long)]
    capacity: Option<PathBuf>,
    /// `scalar`, `ab:<alpha>:<beta>` or `veclex:<perm>`.
    #[arg(long, default_value = "scalar")]
    order: String,
    /// Catalog name, inline JSON, or a path to a JSON kernel.
    #[arg(long, default_value = "choquet")]
    kernel: String,
    /// Addition; defaults to the carrier's own.
    #[arg(long)]
    add: Option<String>,
    /// Seed for random capacities that do not carry one.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// JSON config; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Kernel to check (repeatable).
    #[arg(long)]
    kernel: Vec<String>,
    /// Order to check under (repeatable).
    #[arg(long)]
    order: Vec<String>,
    #[arg(long)]
    add: Option<String>,
    /// Arities, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Grid resolution m.
    #[arg(long)]
    grid: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Aggregate(a) => {
            let outcome = aggregate::run(&AggregateJob {
                input: a.input,
                capacity: a.capacity,
                order: a.order,
                kernel: a.kernel,
                add: a.add,
                seed: a.seed,
            })?;
            emit(a.output.as_deref(), &outcome.render(a.format)?)?;
            Ok(outcome.exit_code() as u8)
        }
        Command::Verify(v) => {
            let outcome = verify::run(&VerifyJob {
                suite: Some(v.suite),
                config: v.config,
                kernels: v.kernel,
                orders: v.order,
                add: v.add,
                n: v.n,
                grid: v.grid,
                seed: v.seed,
            })?;
            let text = serde_json::to_string_pretty(&outcome.to_json())? + "\n";
            emit(v.output.as_deref(), &text)?;
            Ok(outcome.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(1)
        }
    }
}
