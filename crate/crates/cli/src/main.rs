use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod report;

use commands::{CliResult, CostOptions, GpSource, PowerBase, RunOptions};
use report::OutputMode;

/// Simulator front end for a reversible state vector parallel processor.
#[derive(Parser)]
#[command(name = "rsvp", version)]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: OutputMode,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an address diagram over a word set.
    Run {
        program: PathBuf,
        words: PathBuf,
        /// Bit (name or index) whose set words are reported.
        #[arg(long)]
        flag: Option<String>,
        /// Print the word contents after every step.
        #[arg(long)]
        trace: bool,
        /// Fail if a locked word would have changed had it been unlocked.
        #[arg(long)]
        verify_locks: bool,
        /// Lock words whose listed bits (comma separated) are all 1.
        #[arg(long)]
        lock: Option<String>,
    },
    /// Flag the words whose key bits spell a keyword.
    Search {
        words: PathBuf,
        #[arg(long)]
        query: String,
        /// Comma-separated bit indices matched by the query, leftmost first.
        /// Defaults to every non-flag bit, highest first.
        #[arg(long)]
        key_bits: Option<String>,
        /// Flag bit index. Without it a zero flag bit is added above the words.
        #[arg(long)]
        flag: Option<usize>,
    },
    /// Enumerate the satisfying assignments of a formula.
    Sat {
        formula: PathBuf,
        /// Address width. Defaults to the number of formula variables.
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long, default_value_t = 20)]
        max_vars: usize,
        /// Cross-check against direct evaluation.
        #[arg(long)]
        check: bool,
    },
    /// Report global properties of a truth table.
    Gp(GpArgs),
    /// Compare CAM and RSVP cost for one controlled NOT.
    #[command(allow_negative_numbers = true)]
    Cost {
        /// Address bits per row; rows have n + 1 bits.
        #[arg(long)]
        n: u32,
        /// Number of words. Defaults to the full count 2^(n+1).
        #[arg(long = "L")]
        words: Option<u64>,
        #[arg(long, default_value_t = 1)]
        controls: u32,
        #[arg(long, default_value_t = 1.0)]
        delta1: f64,
        #[arg(long, default_value_t = 1.0)]
        delta2: f64,
        #[arg(long, default_value_t = 1.0)]
        p1: f64,
        #[arg(long, default_value_t = 1.0)]
        p2: f64,
        /// Fraction of RSVP words that are locked.
        #[arg(long, default_value_t = 0.0)]
        lock_fraction: f64,
        /// Also run both machines on a generated full count.
        #[arg(long)]
        empirical: bool,
        #[arg(long, value_enum, default_value = "2")]
        power_base: PowerBase,
        /// Largest row width materialized by --empirical.
        #[arg(long, default_value_t = 20)]
        max_vars: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GpSourceArgs {
    formula: Option<PathBuf>,
    /// Truth table file of 0/1 characters; whitespace is ignored.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct GpArgs {
    #[command(flatten)]
    source: GpSourceArgs,
    #[arg(long, conflicts_with = "table")]
    vars: Option<usize>,
    #[arg(long, default_value_t = 20)]
    max_vars: usize,
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Run {
            program,
            words,
            flag,
            trace,
            verify_locks,
            lock,
        } => commands::cmd_run(
            &program,
            &words,
            &RunOptions {
                flag: flag.as_deref(),
                trace,
                verify_locks,
                lock: lock.as_deref(),
            },
        ),
        Command::Search {
            words,
            query,
            key_bits,
            flag,
        } => {
            let keys = key_bits.as_deref().map(commands::parse_index_list).transpose()?;
            commands::cmd_search(&words, &query, keys.as_deref(), flag)
        }
        Command::Sat {
            formula,
            vars,
            max_vars,
            check,
        } => commands::cmd_sat(&formula, vars, max_vars, check),
        Command::Gp(args) => {
            let source = match (&args.source.formula, &args.source.table) {
                (_, Some(table)) => GpSource::Table(table),
                (Some(path), None) => GpSource::Formula {
                    path,
                    vars: args.vars,
                    max_vars: args.max_vars,
                },
                (None, None) => return Err(commands::CliError::input("a formula file or --table is required")),
            };
            commands::cmd_gp(source)
        }
        Command::Cost {
            n,
            words,
            controls,
            delta1,
            delta2,
            p1,
            p2,
            lock_fraction,
            empirical,
            power_base,
            max_vars,
        } => commands::cmd_cost(&CostOptions {
            n,
            words,
            controls,
            delta1,
            delta2,
            p1,
            p2,
            lock_fraction,
            power_base,
            empirical,
            max_vars,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
